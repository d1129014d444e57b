//! Network construction from interaction logs: parsing, time windows,
//! giant components and node-bootstrap replicates.

mod bootstrap;
mod components;
mod edgelist;
mod records;
mod window;

pub use bootstrap::{bootstrap_networks, bootstrap_replicate, replicate_seed, BootstrapStream};
pub use components::{connected_components, giant_component, giant_component_nodes};
pub use edgelist::parse_edge_list;
pub use records::{parse_records, InteractionKind, InteractionRecord, ParsedRecords, Reject};
pub use window::{build_window_network, validate_series, WindowSpec, DEFAULT_KINDS};
