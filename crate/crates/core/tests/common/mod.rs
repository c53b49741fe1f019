#![allow(dead_code)]

use std::collections::BTreeSet;
use std::process::{Command, Output};

use opcomp::json::parse_operator_spec;
use opcomp::rng::trial_rng;
use opcomp::seqspace::{Band, BandedOperator, CoefficientFn, DenselyDefinedOperator, IndexSet, Poly};
use rand::Rng;

pub fn opcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

pub fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json stdout")
}

fn random_poly<R: Rng>(rng: &mut R, max_degree: usize) -> Poly {
    if rng.gen_bool(0.2) {
        return Poly::zero();
    }
    let degree = rng.gen_range(0..=max_degree);
    let coeffs: Vec<i64> = (0..=degree).map(|_| rng.gen_range(-3..=3)).collect();
    Poly::from_ints(&coeffs)
}

fn piecewise(modulus: usize, pieces: Vec<Poly>) -> CoefficientFn {
    CoefficientFn::new(modulus, pieces.into_iter().enumerate().collect()).expect("one piece per residue")
}

pub fn random_banded<R: Rng>(rng: &mut R) -> BandedOperator {
    let modulus = rng.gen_range(1..=3);
    let mut offsets: Vec<i64> = (-3..=3).filter(|_| rng.gen_bool(0.5)).collect();
    if offsets.is_empty() {
        offsets.push(0);
    }
    let bands = offsets
        .into_iter()
        .map(|offset| Band {
            offset,
            coeff: piecewise(modulus, (0..modulus).map(|_| random_poly(rng, 2)).collect()),
        })
        .collect();
    BandedOperator::new(bands).expect("distinct offsets")
}

/// Pairs `(2k−1, 2k)`: odd rows read offsets `0, +1`, even rows `−1, 0`.
fn adjacent_pairs<R: Rng>(rng: &mut R) -> BandedOperator {
    let mut p = || random_poly(rng, 1);
    let (a, b, c, d) = (p(), p(), p(), p());
    BandedOperator::new(vec![
        Band {
            offset: -1,
            coeff: piecewise(2, vec![c, Poly::zero()]),
        },
        Band {
            offset: 0,
            coeff: piecewise(2, vec![d, a]),
        },
        Band {
            offset: 1,
            coeff: piecewise(2, vec![Poly::zero(), b]),
        },
    ])
    .expect("distinct offsets")
}

/// Pairs `(4k−3, 4k−1)` and `(4k−2, 4k)`: rows `1, 2 mod 4` read offsets
/// `0, +2`, rows `3, 0 mod 4` read `−2, 0`.
fn gapped_pairs<R: Rng>(rng: &mut R) -> BandedOperator {
    let mut p = || random_poly(rng, 1);
    let lower = vec![p(), Poly::zero(), Poly::zero(), p()];
    let diag = vec![p(), p(), p(), p()];
    let upper = vec![Poly::zero(), p(), p(), Poly::zero()];
    BandedOperator::new(vec![
        Band {
            offset: -2,
            coeff: piecewise(4, lower),
        },
        Band {
            offset: 0,
            coeff: piecewise(4, diag),
        },
        Band {
            offset: 2,
            coeff: piecewise(4, upper),
        },
    ])
    .expect("distinct offsets")
}

fn set(modulus: usize, residues: &[usize], add: &[i64], remove: &[i64]) -> IndexSet {
    IndexSet::new(
        modulus,
        residues.iter().copied().collect(),
        add.iter().copied().collect::<BTreeSet<_>>(),
        remove.iter().copied().collect::<BTreeSet<_>>(),
    )
    .expect("valid index set")
}

pub fn bundled_pairing_operator() -> DenselyDefinedOperator {
    let fixture: serde_json::Value =
        serde_json::from_str(opcomp::cli::fixture("pairing-example").expect("bundled")).expect("valid json");
    parse_operator_spec(&fixture["operator"], "operator").expect("valid operator")
}

/// Bundled and generated pair-partition instances `(label, T, M)`.
pub fn pair_partition_fixtures() -> Vec<(String, DenselyDefinedOperator, IndexSet)> {
    let mut out = vec![
        (
            "bundled example, odds".to_string(),
            bundled_pairing_operator(),
            IndexSet::odds(),
        ),
        (
            "bundled example, evens".to_string(),
            bundled_pairing_operator(),
            IndexSet::evens(),
        ),
        (
            "bundled example, odds with exceptions".to_string(),
            bundled_pairing_operator(),
            set(2, &[1], &[2, 8], &[5]),
        ),
    ];
    let adjacent_sets = [
        set(2, &[1], &[], &[]),
        set(2, &[0], &[], &[]),
        set(4, &[1, 2], &[], &[]),
        set(2, &[1], &[4], &[3]),
    ];
    let gapped_sets = [
        set(4, &[1, 2], &[], &[]),
        set(4, &[1], &[], &[]),
        set(2, &[1], &[], &[]),
        set(4, &[0, 3], &[6], &[]),
    ];
    for trial in 0..14u64 {
        let mut rng = trial_rng(2024, trial);
        let (op, sets, kind) = if trial % 2 == 0 {
            (adjacent_pairs(&mut rng), &adjacent_sets, "adjacent")
        } else {
            (gapped_pairs(&mut rng), &gapped_sets, "gapped")
        };
        let m = sets[rng.gen_range(0..sets.len())].clone();
        out.push((
            format!("generated {kind} pairs #{trial}"),
            DenselyDefinedOperator::new(op),
            m,
        ));
    }
    // invertible 2×2 blocks with growing and with bounded coefficients
    let growing = BandedOperator::new(vec![
        Band {
            offset: -1,
            coeff: piecewise(2, vec![Poly::from_ints(&[0, 1]), Poly::zero()]),
        },
        Band {
            offset: 0,
            coeff: piecewise(2, vec![Poly::from_ints(&[0, 2]), Poly::from_ints(&[0, 1])]),
        },
        Band {
            offset: 1,
            coeff: piecewise(2, vec![Poly::zero(), Poly::from_ints(&[1])]),
        },
    ])
    .unwrap();
    out.push((
        "invertible blocks, growing".into(),
        DenselyDefinedOperator::new(growing),
        IndexSet::odds(),
    ));
    let bounded = BandedOperator::new(vec![
        Band {
            offset: 0,
            coeff: CoefficientFn::constant(opcomp::scalar::int(2)),
        },
        Band {
            offset: 1,
            coeff: piecewise(2, vec![Poly::zero(), Poly::from_ints(&[1])]),
        },
    ])
    .unwrap();
    out.push((
        "bounded blocks".into(),
        DenselyDefinedOperator::new(bounded),
        IndexSet::evens(),
    ));
    let diagonal = BandedOperator::diagonal(CoefficientFn::uniform(Poly::from_ints(&[0, 0, 1])));
    out.push((
        "diagonal, no straddling pair".into(),
        DenselyDefinedOperator::new(diagonal),
        IndexSet::odds(),
    ));
    // difference form with a quadratic coefficient
    let quad = BandedOperator::new(vec![
        Band {
            offset: 0,
            coeff: piecewise(2, vec![Poly::zero(), Poly::from_ints(&[0, 0, 1])]),
        },
        Band {
            offset: 1,
            coeff: piecewise(2, vec![Poly::zero(), Poly::from_ints(&[0, 0, -1])]),
        },
    ])
    .unwrap();
    out.push((
        "difference form, quadratic".into(),
        DenselyDefinedOperator::new(quad),
        IndexSet::evens(),
    ));
    out
}
