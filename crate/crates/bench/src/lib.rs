//! Fixed inputs for the kernel benchmarks, so every run times the same work.
//!
//! Run the benchmarks with `cargo bench -p lab-bench`.

use lab_core::colour::{ColourSystem, RestrictedColourSystem, SystemRecipe};
use lab_core::cores::{extended_core, Core};
use lab_core::graph::{sample_gnp, Graph};
use lab_core::Prob;

pub const SEED: u64 = 0x5eed;

pub fn gnp(n: usize) -> Graph {
    sample_gnp(n, Prob::HALF, SEED)
}

pub fn system(a: &[usize], t: &[usize], uncoloured: usize) -> ColourSystem {
    recipe(a, t, uncoloured, false).build().expect("bench recipe is valid")
}

pub fn restricted(a: &[usize], t: &[usize], uncoloured: usize) -> RestrictedColourSystem {
    recipe(a, t, uncoloured, true).build_restricted().expect("bench recipe is valid")
}

/// Extended core of a two-vertex colour-1 class with `t1` shades.
pub fn core(t1: usize) -> Core {
    extended_core(&system(&[2], &[t1], 0)).expect("bench core is valid")
}

fn recipe(a: &[usize], t: &[usize], uncoloured: usize, restricted: bool) -> SystemRecipe {
    SystemRecipe { a: a.to_vec(), t: t.to_vec(), uncoloured, p: Prob::HALF, seed: SEED, complete: false, restricted }
}
