//! Seeded generators for test instances.

use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bijection::Bijection;
use crate::perm::Permutation;
use crate::revcirc::{Gate, GateKind, ReversibleCircuit};

pub use rand::SeedableRng;

/// The generator used everywhere a seed is accepted.
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Permutation::from_images(image).expect("shuffle of 0..n")
}

/// Lookup-table bijection with both directions.
pub fn table_bijection(width: usize, p: &Permutation, label: impl Into<String>) -> Bijection {
    assert_eq!(p.len(), 1 << width);
    let fwd: Arc<Vec<u64>> = Arc::new(p.images().iter().map(|&v| v as u64).collect());
    let bwd: Arc<Vec<u64>> = Arc::new(p.inverse().images().iter().map(|&v| v as u64).collect());
    Bijection::from_words(width, label, move |x| fwd[x as usize])
        .with_backward_words(move |x| bwd[x as usize])
}

pub fn random_bijection<R: Rng>(rng: &mut R, width: usize) -> Bijection {
    let p = random_permutation(rng, 1 << width);
    table_bijection(width, &p, format!("random({width})"))
}

/// A random circuit whose gates all have arity at most `max_arity`.
pub fn random_circuit<R: Rng>(
    rng: &mut R,
    width: usize,
    gates: usize,
    max_arity: usize,
) -> ReversibleCircuit {
    let kinds: Vec<GateKind> = GateKind::ALL
        .into_iter()
        .filter(|k| k.arity() <= max_arity.min(width))
        .collect();
    assert!(!kinds.is_empty(), "no gate fits in {width} wires");
    let list = (0..gates)
        .map(|_| {
            let kind = *kinds.choose(rng).expect("non-empty");
            let wires = index::sample(rng, width, kind.arity()).into_vec();
            Gate::from_wires(kind, &wires).expect("arity matches")
        })
        .collect();
    ReversibleCircuit::new(width, list).expect("wires sampled in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::check_bijection_exhaustive;

    #[test]
    fn random_objects_are_well_formed() {
        let mut r = rng(7);
        let f = random_bijection(&mut r, 6);
        assert!(check_bijection_exhaustive(&f).unwrap().is_bijective());
        let c = random_circuit(&mut r, 5, 30, 3);
        assert_eq!(c.len(), 30);
        assert!(c.gates().iter().all(|g| g.arity() <= 3));
        let small = random_circuit(&mut r, 2, 10, 3);
        assert!(small.gates().iter().all(|g| g.arity() <= 2));
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_circuit(&mut rng(3), 6, 20, 3);
        let b = random_circuit(&mut rng(3), 6, 20, 3);
        assert_eq!(a, b);
    }
}
