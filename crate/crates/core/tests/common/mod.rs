//! Helpers shared by the integration tests.

use std::path::PathBuf;

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use ccover::{k_subsets, Block, CoverParams, DesignFamily};

pub fn shipped_witnesses() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../witnesses")
}

fn random_k_subset(rng: &mut SplitMix64, n: usize, k: usize, seed: Block) -> Block {
    let mut b = seed;
    while b.len() < k {
        b = b.with(1 + (rng.next_u64() % n as u64) as usize);
    }
    b
}

/// Random blocks, then (when `complete`) one block through each uncovered `r`-subset.
pub fn random_family(n: usize, k: usize, r: usize, seed: u64, complete: bool) -> DesignFamily {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut blocks: Vec<Block> = Vec::new();
    let push = |b: Block, blocks: &mut Vec<Block>| {
        if !blocks.contains(&b) {
            blocks.push(b);
        }
    };
    for _ in 0..rng.next_u64() % 12 {
        let b = random_k_subset(&mut rng, n, k, Block::EMPTY);
        push(b, &mut blocks);
    }
    if complete {
        for s in k_subsets(n, r) {
            if !blocks.iter().any(|b| s.is_subset(*b)) {
                let b = random_k_subset(&mut rng, n, k, s);
                push(b, &mut blocks);
            }
        }
    }
    DesignFamily::covering(CoverParams::new(n, k, r).unwrap(), blocks).unwrap()
}
