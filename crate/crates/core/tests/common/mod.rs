#![allow(dead_code)]

use localsum_core::scalar::rat_int;
use localsum_core::{QPoly, QUniPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let c = rng.gen_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// Sparse polynomial with `∇f(0) = 0` and no constant term.
pub fn random_critical(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> QPoly {
    loop {
        let mut f = QPoly::zero();
        for _ in 0..terms {
            let total = rng.gen_range(2..=max_deg);
            let j = rng.gen_range(0..=total);
            f.add_term(j, total - j, rat_int(nonzero(rng, 4)));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Sparse polynomial with arbitrary support, constant term included.
pub fn random_general(rng: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> QPoly {
    let mut f = QPoly::zero();
    for _ in 0..terms {
        let total = rng.gen_range(0..=max_deg);
        let j = rng.gen_range(0..=total);
        f.add_term(j, total - j, rat_int(nonzero(rng, 6)));
    }
    f
}

/// Product of powers of random lines `y − c·x^k` and a cofactor, so that
/// edges carry repeated rational roots.
pub fn random_branchy(rng: &mut ChaCha8Rng) -> QPoly {
    let mut f = QPoly::one();
    for _ in 0..rng.gen_range(1..=2) {
        let k = rng.gen_range(1..=3);
        let c = nonzero(rng, 2);
        let line = &QPoly::y() - &QPoly::monomial(rat_int(c), k, 0);
        f = &f * &line.checked_pow(rng.gen_range(1..=3), 64).unwrap();
    }
    &f + &random_critical(rng, 7, 1)
}

/// `ψ ∈ Z[x]` with `ψ(0) = 0` and degree at most `deg`.
pub fn random_shear(rng: &mut ChaCha8Rng, deg: u32) -> QUniPoly {
    let mut psi = QUniPoly::zero();
    for e in 1..=deg {
        if rng.gen_bool(0.6) {
            psi.add_term(e, rat_int(rng.gen_range(-3..=3)));
        }
    }
    if psi.is_zero() {
        psi.add_term(1, rat_int(1));
    }
    psi
}

pub fn random_univar(rng: &mut ChaCha8Rng, deg: u32, bound: i64) -> QUniPoly {
    let mut g = QUniPoly::monomial(rat_int(nonzero(rng, 3)), deg);
    for e in 0..deg {
        g.add_term(e, rat_int(rng.gen_range(-bound..=bound)));
    }
    g
}
