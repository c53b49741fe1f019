//! Deciding whether a coordinate subspace `M` is `T`-decomposable, i.e.
//! whether `P_M` maps `D(T) = {x ∈ ℓ₂ : Wx ∈ ℓ₂}` into itself.
//!
//! Exact decisions are made for domain operators in the pair-partition
//! class: asymptotically, every index is coupled by the rows of `W` to at
//! most one other index. `ℓ₂` then splits into one- and two-dimensional
//! blocks, each pair `(p, q)` carrying the finite matrix `G_k` formed by the
//! rows that touch it. Only pairs straddling `M` and its complement matter.
//! With `u` the column of `G_k` at the index in `M` and `v` the other column,
//! the graph norm of `x ↦ W P_M x` on that block is
//!
//! ```text
//!     ρ_k = ‖u‖²(1 + ‖v‖²) / ((1 + ‖u‖²)(1 + ‖v‖²) − ⟨u,v⟩²),
//! ```
//!
//! and `M` is decomposable iff `ρ_k` stays bounded on every straddling
//! family. Each `ρ_k` is a rational function of the pair number `k`, so
//! boundedness is a degree comparison. Finitely many rows and finitely many
//! exceptional indices never affect the answer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::fastq::Accumulator;
use super::index_set::IndexSet;
use super::operator::{BandedOperator, DenselyDefinedOperator};
use super::poly::Poly;
use super::probe::{check_grid, divergence_probe, Growth, GrowthReport, SeriesReport, SumPoint};
use super::sequence::SequenceRecipe;
use crate::error::SeqError;
use crate::scalar::Rational;

/// Rows of `x = (1/n)` probed when no exact decision is available.
pub const HEURISTIC_GRID: [u64; 3] = [1_000, 10_000, 100_000];

/// Witness terms summed when validating a witness.
pub const WITNESS_GRID: [u64; 4] = [32, 64, 128, 256];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Decomposable,
    NotDecomposable,
    UndecidedHeuristic,
}

/// A periodic family of index pairs `(p_k, q_k)`,
/// `p_k = period·(k − 1) + start`, `q_k = p_k + gap`, together with the
/// block `G_k` of `W` acting on it.
#[derive(Clone, Debug)]
struct PairFamily {
    period: i64,
    start: i64,
    gap: i64,
    /// Rows touching the pair, as offsets from `p_k`.
    rows: Vec<i64>,
    first_col: Vec<Poly>,
    second_col: Vec<Poly>,
    first_in_m: bool,
}

impl PairFamily {
    fn first_index(&self, k: i64) -> i64 {
        self.period * (k - 1) + self.start
    }

    fn first_poly(&self) -> Poly {
        Poly::from_ints(&[self.start - self.period, self.period])
    }

    /// Column at the index inside `M`, then the other one.
    fn split(&self) -> (&[Poly], &[Poly]) {
        if self.first_in_m {
            (&self.first_col, &self.second_col)
        } else {
            (&self.second_col, &self.first_col)
        }
    }

    fn difference_form(&self) -> bool {
        self.first_col
            .iter()
            .zip(&self.second_col)
            .all(|(a, b)| a.add(b).is_zero())
    }

    fn norms(&self) -> (Poly, Poly, Poly) {
        let (u, v) = self.split();
        let dot = |a: &[Poly], b: &[Poly]| a.iter().zip(b).fold(Poly::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
        (dot(u, u), dot(v, v), dot(u, v))
    }

    /// Numerator and denominator of `ρ_k`.
    fn ratio(&self) -> (Poly, Poly) {
        let (uu, vv, uv) = self.norms();
        let one = Poly::constant(Rational::one());
        let num = uu.mul(&one.add(&vv));
        let den = one.add(&uu).mul(&one.add(&vv)).sub(&uv.mul(&uv));
        (num, den)
    }

    fn unbounded(&self) -> bool {
        let (num, den) = self.ratio();
        match (num.degree(), den.degree()) {
            (Some(n), Some(d)) => n > d,
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StraddlingFamily {
    pub first_index: String,
    pub second_index: String,
    /// Which member of the pair lies in `M`.
    pub member_in_m: &'static str,
    pub rows: Vec<i64>,
    pub ratio_numerator: String,
    pub ratio_denominator: String,
    pub unbounded: bool,
}

impl From<&PairFamily> for StraddlingFamily {
    fn from(f: &PairFamily) -> Self {
        let p = f.first_poly();
        let (num, den) = f.ratio();
        Self {
            first_index: p.format_in("k"),
            second_index: p.add(&Poly::from_ints(&[f.gap])).format_in("k"),
            member_in_m: if f.first_in_m { "first" } else { "second" },
            rows: f.rows.clone(),
            ratio_numerator: num.format_in("k"),
            ratio_denominator: den.format_in("k"),
            unbounded: f.unbounded(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub pair_partition: bool,
    pub detail: String,
    pub period: usize,
    pub straddling: Vec<StraddlingFamily>,
    /// Growth of the `(1/n)` probe, only for undecided instances.
    pub probe: Option<GrowthReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    pub k: i64,
    pub first: i64,
    pub second: i64,
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub x_first: Rational,
    #[serde(serialize_with = "crate::json::serialize_rational")]
    pub x_second: Rational,
}

/// A sequence in `D(T)` whose `M`-component is not, supported on one
/// straddling pair family along a subsequence `k_1 < k_2 < …`.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub pairs: String,
    pub formula: String,
    pub subsequence: String,
    #[serde(skip)]
    family: PairFamily,
    #[serde(skip)]
    min_k: i64,
}

fn ceil_sqrt(r: &Rational) -> BigInt {
    let c = r.ceil().to_integer();
    if c <= BigInt::zero() {
        return BigInt::zero();
    }
    let s = c.sqrt();
    if &s * &s < c {
        s + 1
    } else {
        s
    }
}

fn eval_all(polys: &[Poly], k: i64) -> Vec<Rational> {
    polys.iter().map(|p| p.eval_int(k)).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

impl Witness {
    fn new(family: PairFamily, min_k: i64) -> Self {
        let p = family.first_poly();
        let q = p.add(&Poly::from_ints(&[family.gap]));
        let pairs = format!("(p_k, q_k) = ({}, {})", p.format_in("k"), q.format_in("k"));
        let (u, _) = family.split();
        let nonzero: Vec<&Poly> = u.iter().filter(|c| !c.is_zero()).collect();
        let (formula, subsequence) = if family.difference_form() {
            let w = match nonzero.as_slice() {
                [single] => format!("|{}|", single.format_in("k")),
                _ => format!("ceil(sqrt({}))", family.norms().0.format_in("k")),
            };
            (
                format!("x_p = x_q = a_k = 1/w_k, w_k = {w}"),
                "k_m = least k > k_(m-1) with w_k >= m".to_string(),
            )
        } else {
            (
                "x_(in M) = 1/R_k, x_(other) = t_k/R_k, t_k = -<u,v>/(1 + |v|^2), R_k = ceil(sqrt(|u|^2))".to_string(),
                "k_m = first k > k_(m-1) on a doubling search with |u|^2 >= m^4 (1 + t_k^2 + |u + t_k v|^2)"
                    .to_string(),
            )
        };
        Self {
            pairs,
            formula,
            subsequence,
            family,
            min_k,
        }
    }

    /// The first `count` nonzero pairs of the witness.
    pub fn terms(&self, count: usize) -> Vec<WitnessTerm> {
        let f = &self.family;
        let difference = f.difference_form();
        let (u_polys, v_polys) = f.split();
        let (u_polys, v_polys) = (u_polys.to_vec(), v_polys.to_vec());
        let single = {
            let nz: Vec<usize> = (0..u_polys.len()).filter(|&i| !u_polys[i].is_zero()).collect();
            (nz.len() == 1).then(|| nz[0])
        };
        let mut out = Vec::with_capacity(count);
        let mut k = self.min_k - 1;
        for m in 1..=count as i64 {
            let target = Rational::from_integer(BigInt::from(m));
            if difference {
                loop {
                    k += 1;
                    let u = eval_all(&u_polys, k);
                    let w = match single {
                        Some(i) => u[i].abs(),
                        None => Rational::from_integer(ceil_sqrt(&dot(&u, &u))),
                    };
                    if !w.is_zero() && w >= target {
                        let a = w.recip();
                        out.push(self.term(k, a.clone(), a));
                        break;
                    }
                }
            } else {
                let bound = Rational::from_integer(BigInt::from(m).pow(4u32));
                let mut step = 1i64;
                k += 1;
                loop {
                    let u = eval_all(&u_polys, k);
                    let v = eval_all(&v_polys, k);
                    let uu = dot(&u, &u);
                    let t = -dot(&u, &v) / (Rational::one() + dot(&v, &v));
                    let mixed: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + &t * b).collect();
                    let g = Rational::one() + &t * &t + dot(&mixed, &mixed);
                    if !uu.is_zero() && uu >= &bound * g {
                        let s = Rational::from_integer(ceil_sqrt(&uu)).recip();
                        let (xm, xo) = (s.clone(), s * t);
                        let (x_first, x_second) = if f.first_in_m { (xm, xo) } else { (xo, xm) };
                        out.push(self.term(k, x_first, x_second));
                        break;
                    }
                    k += step;
                    step = step.saturating_mul(2);
                }
            }
        }
        out
    }

    fn term(&self, k: i64, x_first: Rational, x_second: Rational) -> WitnessTerm {
        let first = self.family.first_index(k);
        WitnessTerm {
            k,
            first,
            second: first + self.family.gap,
            x_first,
            x_second,
        }
    }

    /// The witness truncated to its first `count` terms.
    pub fn to_sequence(&self, count: usize) -> SequenceRecipe {
        let mut entries = BTreeMap::new();
        for t in self.terms(count) {
            entries.insert(t.first, t.x_first);
            entries.insert(t.second, t.x_second);
        }
        SequenceRecipe::Sparse(entries)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposabilityVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub evidence: Evidence,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Offsets whose coefficient is a nonzero polynomial on row `i`'s residue
/// class.
fn active_offsets(w: &BandedOperator, i: i64) -> Vec<i64> {
    w.bands()
        .iter()
        .filter(|b| !b.coeff.piece_for(i).is_zero())
        .map(|b| b.offset)
        .collect()
}

enum Structure {
    Pairs(Vec<PairFamily>),
    Outside(String),
}

/// Reads the asymptotic pair structure of `w` off a window of rows placed
/// beyond every exception and far enough from the start that boundary rows
/// play no role.
fn pair_structure(w: &BandedOperator, m: &IndexSet) -> Structure {
    let period = w.period().lcm(&m.modulus()) as i64;
    let width = w.width() as i64;
    let base = period * ((m.last_exception().max(0) + 4 * width + period) / period + 1);
    let rows = base..base + 6 * width + 2 * period;
    let lo = base - width;
    let size = (rows.end + width - lo) as usize + 1;
    let mut uf = UnionFind::new(size);
    let mut touched_by: Vec<Vec<i64>> = vec![Vec::new(); size];
    for i in rows.clone() {
        let cols: Vec<i64> = active_offsets(w, i).into_iter().map(|d| i + d).collect();
        for &j in &cols {
            touched_by[(j - lo) as usize].push(i);
            uf.union((cols[0] - lo) as usize, (j - lo) as usize);
        }
    }
    let mut components: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for idx in 0..size {
        let root = uf.find(idx);
        components.entry(root).or_default().push(lo + idx as i64);
    }
    let center = base + 3 * width..base + 3 * width + period;
    let mut families: BTreeMap<(i64, i64), PairFamily> = BTreeMap::new();
    for p in center {
        let root = uf.find((p - lo) as usize);
        let comp = &components[&root];
        match comp.as_slice() {
            [_] => {}
            [first, second] => {
                let start = (first - 1).rem_euclid(period) + 1;
                let gap = second - first;
                if families.contains_key(&(start, gap)) {
                    continue;
                }
                let mut row_set: Vec<i64> = touched_by[(first - lo) as usize]
                    .iter()
                    .chain(&touched_by[(second - lo) as usize])
                    .copied()
                    .collect();
                row_set.sort_unstable();
                row_set.dedup();
                let offsets: Vec<i64> = row_set.iter().map(|i| i - first).collect();
                let column = |target: i64| -> Vec<Poly> {
                    offsets
                        .iter()
                        .map(|&e| {
                            w.coefficient(target - e)
                                .map_or_else(Poly::zero, |c| c.along(period, start + e - period))
                        })
                        .collect()
                };
                families.insert(
                    (start, gap),
                    PairFamily {
                        period,
                        start,
                        gap,
                        first_col: column(0),
                        second_col: column(gap),
                        rows: offsets.clone(),
                        first_in_m: m.periodic_contains(*first),
                    },
                );
                // membership of the second index decides straddling below
                let fam = families.get_mut(&(start, gap)).expect("just inserted");
                if m.periodic_contains(*second) == fam.first_in_m {
                    fam.rows.clear();
                    fam.first_col.clear();
                    fam.second_col.clear();
                }
            }
            _ => {
                return Structure::Outside(format!(
                    "index {p} is coupled with {} indices by the rows of the domain operator",
                    comp.len()
                ))
            }
        }
    }
    Structure::Pairs(families.into_values().filter(|f| !f.first_col.is_empty()).collect())
}

/// Smallest pair number from which the family sits past every exception of
/// `m` and all its rows exist.
fn first_clean_k(f: &PairFamily, m: &IndexSet) -> i64 {
    let min_row = f.rows.iter().copied().min().unwrap_or(0);
    let mut k = 1;
    while f.first_index(k) + min_row < 1 || f.first_index(k) <= m.last_exception() {
        k += 1;
    }
    k
}

pub fn decide_decomposable(t: &DenselyDefinedOperator, m: &IndexSet) -> DecomposabilityVerdict {
    let w = t.domain_operator();
    let period = w.period().lcm(&m.modulus());
    match pair_structure(w, m) {
        Structure::Outside(detail) => {
            let probe = divergence_probe(t, m, &SequenceRecipe::harmonic(), &HEURISTIC_GRID).ok();
            DecomposabilityVerdict {
                verdict: Verdict::UndecidedHeuristic,
                witness: None,
                evidence: Evidence {
                    pair_partition: false,
                    detail,
                    period,
                    straddling: Vec::new(),
                    probe,
                },
            }
        }
        Structure::Pairs(families) => {
            let straddling: Vec<StraddlingFamily> = families.iter().map(StraddlingFamily::from).collect();
            let witness = families
                .iter()
                .find(|f| f.unbounded())
                .map(|f| Witness::new(f.clone(), first_clean_k(f, m)));
            let detail = match (&witness, families.len()) {
                (Some(_), _) => "graph norm of P_M is unbounded on a straddling pair family".to_string(),
                (None, 0) => "no pair of the domain operator straddles M and its complement".to_string(),
                (None, _) => "graph norm of P_M is bounded on every straddling pair family".to_string(),
            };
            DecomposabilityVerdict {
                verdict: if witness.is_some() {
                    Verdict::NotDecomposable
                } else {
                    Verdict::Decomposable
                },
                witness,
                evidence: Evidence {
                    pair_partition: true,
                    detail,
                    period,
                    straddling,
                    probe: None,
                },
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplementConsistency {
    pub verdict: Verdict,
    pub complement_verdict: Verdict,
    pub consistent: bool,
}

/// `M` and `M⊥` must be decomposable together; undecided instances are
/// counted as consistent.
pub fn complement_consistency(t: &DenselyDefinedOperator, m: &IndexSet) -> ComplementConsistency {
    let verdict = decide_decomposable(t, m).verdict;
    let complement_verdict = decide_decomposable(t, &m.complement()).verdict;
    let undecided = verdict == Verdict::UndecidedHeuristic || complement_verdict == Verdict::UndecidedHeuristic;
    ComplementConsistency {
        verdict,
        complement_verdict,
        consistent: undecided || verdict == complement_verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessValidation {
    /// `‖Wx‖²` over the first terms: must converge.
    pub domain: SeriesReport,
    /// `‖W P_M x‖²` over the first terms: must diverge at least linearly.
    pub projected: SeriesReport,
    pub validated: bool,
}

/// Sums the witness term by term. Pairs are separate blocks of `W`, so each
/// term contributes independently.
pub fn validate_witness(
    t: &DenselyDefinedOperator,
    m: &IndexSet,
    witness: &Witness,
    grid: &[u64],
) -> Result<WitnessValidation, SeqError> {
    check_grid(grid)?;
    let w = t.domain_operator();
    let terms = witness.terms(*grid.last().expect("grid checked non-empty") as usize);
    let mut full = Accumulator::default();
    let mut projected = Accumulator::default();
    let mut domain_points = Vec::new();
    let mut projected_points = Vec::new();
    let mut next = grid.iter().peekable();
    for (n, term) in terms.iter().enumerate() {
        let x = BTreeMap::from([(term.first, term.x_first.clone()), (term.second, term.x_second.clone())]);
        for &e in &witness.family.rows {
            let i = term.first + e;
            if i < 1 {
                continue;
            }
            let mut row = Rational::zero();
            let mut row_m = Rational::zero();
            for b in w.bands() {
                if let Some(xj) = x.get(&(i + b.offset)) {
                    let v = b.coeff.eval(i) * xj;
                    if m.contains(i + b.offset) {
                        row_m += &v;
                    }
                    row += v;
                }
            }
            full.add_big(&(&row * &row));
            projected.add_big(&(&row_m * &row_m));
        }
        let count = n as u64 + 1;
        if next.peek() == Some(&&count) {
            next.next();
            domain_points.push(SumPoint {
                count,
                value: full.value(),
                exact: full.exact(),
            });
            projected_points.push(SumPoint {
                count,
                value: projected.value(),
                exact: projected.exact(),
            });
        }
    }
    let domain = SeriesReport::from_points(domain_points);
    let projected = SeriesReport::from_points(projected_points);
    let last = grid[grid.len() - 1] as f64;
    let validated = domain.growth == Growth::Convergent
        && projected.growth == Growth::Divergent
        && projected.last_value() >= last / 4.0;
    Ok(WitnessValidation {
        domain,
        projected,
        validated,
    })
}
