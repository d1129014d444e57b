use polardim::sbm::{sample_sbm, ExperimentGrid, SbmConfig};

#[test]
fn expected_edge_count_of_two_equal_blocks() {
    let config = SbmConfig::two_block([500, 500], 0.3, 0.05, 99).unwrap();
    let g = sample_sbm(&config).unwrap();
    let within: f64 = 2.0 * (500.0 * 499.0 / 2.0);
    let between = 500.0 * 500.0;
    let mean = within * 0.3 + between * 0.05;
    let sd = (within * 0.3 * 0.7 + between * 0.05 * 0.95).sqrt();
    assert_eq!(mean, 87_350.0);
    assert!(
        (g.edge_count() as f64 - mean).abs() < 3.0 * sd,
        "{} edges",
        g.edge_count()
    );
}

#[test]
fn block_pair_counts_cover_every_edge() {
    let config = SbmConfig::two_block([30, 70], 0.4, 0.1, 5).unwrap();
    let g = sample_sbm(&config).unwrap();
    let counts = config.edge_counts(&g);
    let total: u64 = counts[0][0] + counts[1][1] + counts[0][1];
    assert_eq!(total as usize, g.edge_count());
    let pairs = config.pair_counts();
    assert_eq!(pairs[0][0], 30 * 29 / 2);
    assert_eq!(pairs[0][1], 30 * 70);
}

#[test]
fn default_grids_have_published_sizes() {
    use polardim::sbm::*;
    let e = ExperimentGrid::engagement(
        &DEFAULT_IN_PROBS,
        &DEFAULT_OUT_PROBS,
        DEFAULT_NODES,
        DEFAULT_REPLICATES,
        100,
        0,
    )
    .unwrap();
    assert_eq!(e.len(), 1200);
    let i = ExperimentGrid::imbalance(
        &DEFAULT_IN_PROBS,
        DEFAULT_IMBALANCE_OUT_PROB,
        &DEFAULT_SPLITS,
        DEFAULT_NODES,
        DEFAULT_REPLICATES,
        100,
        0,
    )
    .unwrap();
    assert_eq!(i.len(), 1600);
}

#[test]
fn replicates_do_not_depend_on_run_order() {
    let grid = ExperimentGrid::engagement(&[0.3], &[0.05], 80, 3, 20, 4).unwrap();
    let all = grid.run().unwrap();
    assert_eq!(all[2], grid.run_one(2).unwrap());
}
