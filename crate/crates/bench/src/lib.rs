//! Fixtures shared by the benchmarks.

use exuberance::sim::{simulate, Dgp, DgpSpec, VolPath};
use exuberance::Series;

/// Driftless Gaussian random walk of length `t`.
pub fn walk(t: usize, seed: u64) -> Series {
    simulate(&DgpSpec::random_walk(t), &VolPath::Constant, seed).expect("valid spec")
}

/// Walk with one mildly explosive episode on `(0.4 T, 0.6 T]`.
pub fn bubble(t: usize, seed: u64) -> Series {
    let spec = DgpSpec::new(
        Dgp::PwyBubble {
            bubbles: vec![exuberance::sim::BubbleWindow { tau_e: 0.4, tau_c: 0.6 }],
            c: 1.0,
            alpha: 0.6,
            y_star: 0.0,
        },
        t,
    );
    simulate(&spec, &VolPath::Constant, seed).expect("valid spec")
}
