//! Inputs shared by the benchmarks.

use mlspan_core::{Family, GeneratorSpec, MlgsInstance};

/// Erdős–Rényi instance with `eps = 1` and the given shape.
pub fn er_instance(n: usize, levels: usize, stretch: f64, seed: u64) -> MlgsInstance {
    GeneratorSpec {
        family: Family::ErdosRenyi { eps: 1.0 },
        n,
        levels,
        stretch,
        seed,
    }
    .generate()
    .expect("benchmark instance")
}

/// Watts–Strogatz instance with `k = 6`, `beta = 0.2`.
pub fn ws_instance(n: usize, levels: usize, stretch: f64, seed: u64) -> MlgsInstance {
    GeneratorSpec {
        family: Family::WattsStrogatz { k: 6, beta: 0.2 },
        n,
        levels,
        stretch,
        seed,
    }
    .generate()
    .expect("benchmark instance")
}
