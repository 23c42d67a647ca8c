//! Decision pipeline for embeddings of the polydisk `P(a,1)` into balls,
//! plus the sharpness constructions that show where the method stops.
//!
//! For `2 ≤ a` below the threshold `(5+√7)/3` and any `c < 2 + a/2` the
//! candidate sets over the diagonal targets `e_{1,1}^d` dry up past a
//! computable ceiling `d_a`, repeated factor pairs are impossible, and a
//! counting bound caps the index any factorization can reach. Running the
//! criterion search at one index level above that cap then decides the
//! obstruction outright. Everything is evaluated in exact rational
//! arithmetic; square-root comparisons go through integer perfect-square
//! tests.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

use crate::criterion::{candidates, run_criterion, CriterionConfig, ObstructionReport, Outcome};
use crate::domain::{compare_a_to_sqrt7_threshold, ToricDomain};
use crate::error::{EchError, Result};
use crate::generator::{ConvexGenerator, Edge, EdgeLabel};
use crate::numutil::{isqrt, perfect_sqrt};
use crate::rational::{floor_to_i64, rat_int, Rational};

/// Parameters of one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub a: Rational,
    pub c: Rational,
    /// Ceiling on the index level `D` the criterion run may require.
    pub d_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineVerdict {
    /// Every step of the argument verified computationally: no embedding
    /// of `P(a,1)` into `B(c)` exists.
    EmbeddingObstructed,
    /// The criterion search found a witness (or the run was cut short);
    /// nothing is claimed either way.
    Inconclusive,
}

/// Full record of a pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub d_a: i64,
    /// Candidate count per diagonal level `d ≤ d_a`.
    pub n_d: BTreeMap<i64, u64>,
    /// `N = Σ d·N_d`.
    pub n: i64,
    /// Target index level `D = N + 1`.
    pub target_level: i64,
    pub verdict: PipelineVerdict,
    /// Human-readable markdown trace of every step.
    pub trace: String,
    /// The underlying criterion run on `e_{1,1}^D`.
    pub criterion: ObstructionReport,
}

/// Strict upper bounds forced on any `Λ ≤ e_{1,1}^d` between `P(a,1)` and
/// `B(c)`: returns `(x_bound, y_bound)` with
/// `x(Λ) < x_bound - a·y(Λ)` and `y(Λ) < y_bound`, where
/// `x_bound = (2 + a/2)·d` and `y_bound = (d(a-2) + 2) / (2(a-1))`.
pub fn xy_upper_bounds(a: &Rational, c: &Rational, d: i64) -> Result<(Rational, Rational)> {
    if *a <= rat_int(1) {
        return Err(EchError::ParamOutOfRange("bounds need a > 1".into()));
    }
    if d < 1 {
        return Err(EchError::ParamOutOfRange("bounds need d >= 1".into()));
    }
    if *c >= folding_bound(a) {
        return Err(EchError::ParamOutOfRange("bounds need c < 2 + a/2".into()));
    }
    let d = rat_int(d);
    let x_bound = folding_bound(a) * d.clone();
    let y_bound = (d * (a - rat_int(2)) + rat_int(2)) / (rat_int(2) * (a - rat_int(1)));
    Ok((x_bound, y_bound))
}

fn folding_bound(a: &Rational) -> Rational {
    rat_int(2) + a / rat_int(2)
}

/// Least ceiling `d_a` such that for every `d > d_a` no generator relates
/// to `e_{1,1}^d` between `P(a,1)` and any `B(c)` with `c < 2 + a/2`.
///
/// Two exact-arithmetic conditions must hold beyond the ceiling: the
/// derivative expression `(d(a²-7a+4) + 2(a²+1)) / (a-1)` is negative
/// (linear in `d` with negative slope on the admissible range), and the
/// quadratic `(-3a²+10a-6)d² - 2(2a²+a-1)d + 4(a²-a+1)` is positive (its
/// leading coefficient is positive exactly below the threshold).
/// `d_a = max(d_1, d_2)` where each `d_i` is the least integer past the
/// relevant root, found by exact evaluation.
pub fn compute_d_a(a: &Rational) -> Result<i64> {
    if *a < rat_int(2) {
        return Err(EchError::ParamOutOfRange("the ceiling needs a >= 2".into()));
    }
    if compare_a_to_sqrt7_threshold(a) != Ordering::Less {
        return Err(EchError::AboveThreshold);
    }
    let a2 = a * a;

    // d_1: slope a²-7a+4 < 0 on [2, threshold), so the numerator stays
    // negative past q/(-slope).
    let slope = a2.clone() - rat_int(7) * a + rat_int(4);
    assert!(
        slope < rat_int(0),
        "slope is negative on the admissible range"
    );
    let crossing = rat_int(2) * (a2.clone() + rat_int(1)) / -slope;
    let d_1 = floor_to_i64(&crossing) + 1;

    // d_2: leading coefficient positive below the threshold; find the
    // largest integer where the quadratic is still nonpositive.
    let lead = rat_int(-3) * a2.clone() + rat_int(10) * a - rat_int(6);
    assert!(
        lead > rat_int(0),
        "leading coefficient is positive below the threshold"
    );
    let lin = rat_int(2) * (rat_int(2) * a2.clone() + a - rat_int(1));
    let constant = rat_int(4) * (a2.clone() - a + rat_int(1));
    let q = |d: i64| -> Rational {
        let d = rat_int(d);
        lead.clone() * d.clone() * d.clone() - lin.clone() * d + constant.clone()
    };
    let disc = lin.clone() * lin.clone() - rat_int(4) * lead.clone() * constant.clone();
    let d_2 = if disc < rat_int(0) {
        0
    } else {
        let vertex_floor = floor_to_i64(&(lin.clone() / (rat_int(2) * lead.clone())));
        let mut hi = floor_to_i64(&(lin.clone() / lead.clone())) + 2;
        assert!(
            q(hi) > rat_int(0),
            "past the larger root the quadratic is positive"
        );
        // q is increasing right of the vertex: binary search the sign change.
        let mut lo = vertex_floor + 1;
        let mut last_nonpositive = if q(vertex_floor) <= rat_int(0) {
            Some(vertex_floor)
        } else {
            None
        };
        while lo <= hi {
            let mid = lo + (hi - lo) / 2;
            if q(mid) <= rat_int(0) {
                last_nonpositive = Some(last_nonpositive.map_or(mid, |p| p.max(mid)));
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        last_nonpositive.map_or(0, |m| m + 1)
    };
    Ok(d_1.max(d_2).max(1))
}

/// Whether no generator can relate to `e_{1,1}^d` while its self-product
/// matches the index of `e_{1,1}^{2d}` — the statement that rules repeated
/// identical factor pairs out of the search.
///
/// Closed form: such a generator must be a single edge `e_{x,y}` with
/// `x·y = d²` and `x + y = 3d - 1`, so `x = (3d-1 ± √(5d²-6d+1))/2`; the
/// square root must be an exact integer and the surviving branches are
/// eliminated by the action test `x + a·y ≤ c·d`.
pub fn no_repeats_check(a: &Rational, c: &Rational, d: i64) -> Result<bool> {
    if *a < rat_int(2) || *a > rat_int(3) {
        return Err(EchError::ParamOutOfRange(
            "no-repeats check needs 2 <= a <= 3".into(),
        ));
    }
    if *c >= folding_bound(a) {
        return Err(EchError::ParamOutOfRange(
            "no-repeats check needs c < 2 + a/2".into(),
        ));
    }
    if d < 1 {
        return Err(EchError::ParamOutOfRange(
            "no-repeats check needs d >= 1".into(),
        ));
    }
    let Some(root) = perfect_sqrt(5 * d * d - 6 * d + 1) else {
        return Ok(true); // no integer solution at all
    };
    for signed in [root, -root] {
        let twice_x = 3 * d - 1 + signed;
        if twice_x <= 0 || twice_x % 2 != 0 {
            continue;
        }
        let x = twice_x / 2;
        let y = 3 * d - 1 - x;
        if y <= 0 || x * y != d * d {
            continue;
        }
        if num_integer::gcd(x, y) != 1 {
            continue;
        }
        // e_{x,y} meets the index and endpoint conditions by construction;
        // only the action test can reject it.
        debug_assert_eq!(ConvexGenerator::e(x, y, 1).index(), d * (d + 3));
        let action = rat_int(x) + a * rat_int(y);
        if action <= c * rat_int(d) {
            return Ok(false); // a repeatable factor pair exists
        }
    }
    Ok(true)
}

/// Exhaustive cross-check of [`no_repeats_check`]: search the actual
/// candidate set at level `d` for an `h`-free member whose self-product
/// index matches `e_{1,1}^{2d}`.
pub fn no_repeats_exhaustive(a: &Rational, c: &Rational, d: i64) -> bool {
    let from = ToricDomain::Polydisk(a.clone(), rat_int(1));
    let to = ToricDomain::Ball(c.clone());
    let double_index = ConvexGenerator::e(1, 1, 2 * d).index();
    !candidates(&from, &to, &ConvexGenerator::e(1, 1, d))
        .into_iter()
        .filter(|g| !g.has_h_edges())
        .any(|g| g.product(&g).expect("h-free").index() == double_index)
}

/// Three-edge generator `e_{1,0}^F e_{m,1} e_{0,1}^V` with endpoint sum
/// `x + y = 3d - 1` and index `d² + 3d`, for `d ≥ 9`.
///
/// `F` is chosen from the residue of `C = 7d² - k²` mod 4 (`k` the integer
/// square root of `7d²`) so that `7d² - 6d + 4F` is a perfect square;
/// residue 1 is impossible mod 4, residue 3 takes
/// `F = (3d - (C-1)/2 + k)/2`, residues 0 and 2 take `F = (6d - C)/4`.
pub fn construct_fvm(d: i64) -> Result<ConvexGenerator> {
    if d < 9 {
        return Err(EchError::DomainTooSmall { d });
    }
    let k = isqrt(7 * d * d);
    let c_gap = 7 * d * d - k * k;
    assert!(c_gap > 0, "7d² is never a perfect square");
    assert!(c_gap < 6 * d, "the square-root gap stays below 6d");
    let (f, s) = match c_gap % 4 {
        1 => unreachable!("7d² - k² ≡ 1 (mod 4) has no solutions"),
        3 => {
            let numerator = 3 * d - (c_gap - 1) / 2 + k;
            assert_eq!(numerator % 2, 0, "parity of k and d makes F integral");
            (numerator / 2, k + 1)
        }
        _ => {
            assert_eq!((6 * d - c_gap) % 4, 0, "residue forces divisibility by 4");
            ((6 * d - c_gap) / 4, k)
        }
    };
    assert_eq!(
        s * s,
        7 * d * d - 6 * d + 4 * f,
        "the shifted discriminant is a square"
    );
    assert!(f >= 0);
    // upper bound 2F - 3d + 1 ≤ √(7d² - 3)
    let excess = 2 * f - 3 * d + 1;
    assert!(
        excess <= 0 || excess * excess <= 7 * d * d - 3,
        "F respects its upper bound"
    );

    let v = (3 * d - 2 - s) / 2;
    let m = (3 * d - 2 + s) / 2 - f;
    assert_eq!(
        (3 * d - 2 - s) % 2,
        0,
        "V is integral for either parity of d"
    );
    assert!(v >= 0 && m >= 0, "V and m are nonnegative");

    let mut parts: Vec<Edge> = Vec::new();
    if f > 0 {
        parts.push(Edge::new(1, 0, f, EdgeLabel::E)?);
    }
    parts.push(Edge::new(m, 1, 1, EdgeLabel::E)?);
    if v > 0 {
        parts.push(Edge::new(0, 1, v, EdgeLabel::E)?);
    }
    let g = ConvexGenerator::from_edges(parts)?;
    assert_eq!(
        g.x() + g.y(),
        3 * d - 1,
        "endpoint sum matches the diagonal target"
    );
    assert_eq!(g.index(), d * (d + 3), "index matches the diagonal target");
    Ok(g)
}

/// For `a` at or above the threshold, a generator `Λ ≤ e_{1,1}^d` between
/// `P(a,1)` and `B(2 + a/2 - ε)` for some explicit `ε > 0` — the reason the
/// obstruction cannot be pushed past the threshold.
pub fn sharpness_witness(a: &Rational, d: i64) -> Result<(Rational, ConvexGenerator)> {
    if compare_a_to_sqrt7_threshold(a) == Ordering::Less {
        return Err(EchError::BelowThreshold);
    }
    if d < 1 {
        return Err(EchError::ParamOutOfRange(
            "sharpness witness needs d >= 1".into(),
        ));
    }
    let witness = match d {
        1 => ConvexGenerator::e(1, 0, 2),
        2 => ConvexGenerator::e(1, 0, 5),
        3..=8 => {
            let f = (d * d - 3 * d + 2) / 2;
            let m = (-d * d + 9 * d - 6) / 2;
            assert!(f > 0 && m > 0);
            let mut g = ConvexGenerator::e(1, 0, f);
            g.push_edge(Edge::new(m, 1, 1, EdgeLabel::E)?)?;
            g
        }
        _ => construct_fvm(d)?,
    };
    let polydisk = ToricDomain::Polydisk(a.clone(), rat_int(1));
    let action = polydisk.action(&witness);
    let epsilon = folding_bound(a) - action.clone() / rat_int(d);
    assert!(
        epsilon > rat_int(0),
        "the witness action stays under the folding bound"
    );
    let c = folding_bound(a) - epsilon.clone();
    let ball = ToricDomain::Ball(c);
    assert!(
        crate::criterion::leq(&polydisk, &ball, &witness, &ConvexGenerator::e(1, 1, d)).holds(),
        "the witness must relate to the diagonal target at the shaved radius"
    );
    Ok((epsilon, witness))
}

/// Decide the embedding `P(a,1) ↪ B(c)` for exact rational parameters with
/// `2 ≤ a` below the threshold and `c < 2 + a/2`.
///
/// Computes the candidate ceiling `d_a`, enumerates the candidate counts
/// `N_d` per diagonal level, verifies the no-repeats statement on every
/// level, and runs the criterion search on `e_{1,1}^D` with `D = N + 1`
/// where `N = Σ d·N_d`. Since every usable `(level, candidate)` pair is
/// distinct, the composite index any factorization reaches is at most
/// `N(N+3) < D(D+3)`, so the search exhausts and the embedding is
/// obstructed.
pub fn theorem14_pipeline(params: &PipelineParams) -> Result<PipelineReport> {
    let PipelineParams { a, c, d_max } = params;
    if *a < rat_int(2) {
        return Err(EchError::ParamOutOfRange("pipeline needs a >= 2".into()));
    }
    if compare_a_to_sqrt7_threshold(a) != Ordering::Less {
        return Err(EchError::AboveThreshold);
    }
    if *c <= rat_int(0) {
        return Err(EchError::ParamOutOfRange("pipeline needs c > 0".into()));
    }
    if *c >= folding_bound(a) {
        return Err(EchError::NotBelowVolumeBound);
    }

    let mut trace = String::new();
    let _ = writeln!(trace, "# Obstruction run: P({a},1) into B({c})");
    let _ = writeln!(
        trace,
        "- folding bound 2 + a/2 = {}; c = {c} lies strictly below it",
        folding_bound(a)
    );
    let _ = writeln!(trace, "- a = {a} is below (5+sqrt(7))/3 (exact integer comparison), so a finite candidate ceiling exists");

    let d_a = compute_d_a(a)?;
    if d_a > *d_max {
        return Err(EchError::SearchCeiling {
            required: d_a,
            d_max: *d_max,
        });
    }
    let _ = writeln!(trace, "- candidate ceiling d_a = {d_a}: beyond it the bounding-box index bound contradicts the action and endpoint constraints");

    let from = ToricDomain::Polydisk(a.clone(), rat_int(1));
    let to = ToricDomain::Ball(c.clone());
    let mut n_d: BTreeMap<i64, u64> = BTreeMap::new();
    let mut n = 0i64;
    let mut last_nonempty = 0i64;
    for d in 1..=d_a {
        let count = candidates(&from, &to, &ConvexGenerator::e(1, 1, d)).len() as u64;
        if count > 0 {
            last_nonempty = d;
        }
        n += d * count as i64;
        n_d.insert(d, count);
    }
    let _ = writeln!(
        trace,
        "- per-level candidate counts N_d for d = 1..{d_a}: {:?}",
        n_d.values().collect::<Vec<_>>()
    );
    if last_nonempty < d_a {
        let _ = writeln!(trace, "- exhaustive search certifies candidates stop at level {last_nonempty}, below the proof-safe ceiling {d_a}");
    }
    for d in (d_a + 1)..=(d_a + 3) {
        let extra = candidates(&from, &to, &ConvexGenerator::e(1, 1, d)).len();
        assert_eq!(extra, 0, "analytic ceiling violated at level {d}");
    }
    let _ = writeln!(
        trace,
        "- cross-check: levels {}..{} enumerate to empty candidate sets",
        d_a + 1,
        d_a + 3
    );

    let mut repeats_excluded = true;
    for d in 1..=d_a {
        if !no_repeats_check(a, c, d)? {
            repeats_excluded = false;
        }
    }
    let _ = writeln!(
        trace,
        "- repeated identical factor pairs: {}",
        if repeats_excluded {
            "excluded on every level (single-edge closed form plus action test), pruning enabled"
        } else {
            "could not be excluded, searching with repeats allowed"
        }
    );

    let n_total = n;
    let target_level = n_total + 1;
    if target_level > *d_max {
        return Err(EchError::SearchCeiling {
            required: target_level,
            d_max: *d_max,
        });
    }
    let _ = writeln!(
        trace,
        "- N = sum of d*N_d = {n_total}; target level D = N + 1 = {target_level}"
    );
    let _ = writeln!(
        trace,
        "- counting bound: distinct pairs cap the composite index at N(N+3) = {} < D(D+3) = {}",
        n_total * (n_total + 3),
        target_level * (target_level + 3)
    );

    let mut cfg = CriterionConfig::new(from, to, ConvexGenerator::e(1, 1, target_level));
    cfg.no_repeats_pruning = repeats_excluded;
    // Factor parts above the ceiling have empty candidate sets (proven
    // bound, cross-checked above), so the search need not revisit them.
    cfg.part_index_cap = Some(d_a * (d_a + 3));
    let _ = writeln!(
        trace,
        "- criterion factor parts above level {d_a} are excluded by the established ceiling"
    );
    let criterion = run_criterion(&cfg)?;
    let verdict = match criterion.outcome {
        Outcome::Obstructed => PipelineVerdict::EmbeddingObstructed,
        Outcome::WitnessFound => PipelineVerdict::Inconclusive,
    };
    match verdict {
        PipelineVerdict::EmbeddingObstructed => {
            let _ = writeln!(
                trace,
                "- criterion search on e_{{1,1}}^{target_level} exhausted after {} nodes: no factorization satisfies all three conditions",
                criterion.nodes_explored
            );
            let _ = writeln!(trace, "- verdict: EmbeddingObstructed — P({a},1) does not symplectically embed into B({c})");
        }
        PipelineVerdict::Inconclusive => {
            let _ = writeln!(
                trace,
                "- criterion search found a witness; the run is inconclusive and claims nothing"
            );
        }
    }

    Ok(PipelineReport {
        d_a,
        n_d,
        n: n_total,
        target_level,
        verdict,
        trace,
        criterion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::leq;
    use crate::rational::rat;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn bounds_at_a_two_force_the_axis() {
        let (x_bound, y_bound) = xy_upper_bounds(&rat_int(2), &r(29, 10), 5).unwrap();
        assert_eq!(y_bound, rat_int(1)); // y < 1 forces y = 0
        assert_eq!(x_bound, rat_int(15));
        assert!(matches!(
            xy_upper_bounds(&rat_int(2), &r(29, 10), 0),
            Err(EchError::ParamOutOfRange(_))
        ));
        assert!(matches!(
            xy_upper_bounds(&rat_int(2), &rat_int(3), 1),
            Err(EchError::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn candidates_respect_the_analytic_bounds() {
        for (a, c) in [
            (rat_int(2), r(29, 10)),
            (r(9, 4), r(31, 10)),
            (r(5, 2), r(81, 25)),
        ] {
            let d_a = compute_d_a(&a).unwrap();
            let from = ToricDomain::Polydisk(a.clone(), rat_int(1));
            let to = ToricDomain::Ball(c.clone());
            for d in 1..=d_a.min(8) {
                let (x_bound, y_bound) = xy_upper_bounds(&a, &c, d).unwrap();
                for cand in candidates(&from, &to, &ConvexGenerator::e(1, 1, d)) {
                    let y = rat_int(cand.y());
                    assert!(y < y_bound, "a = {a}, d = {d}, cand = {cand}");
                    assert!(
                        rat_int(cand.x()) < x_bound.clone() - a.clone() * y,
                        "a = {a}, d = {d}, cand = {cand}"
                    );
                }
            }
        }
    }

    #[test]
    fn ceiling_values_are_frozen() {
        // a = 2: quadratic 2d² - 18d + 12, larger root ≈ 8.27, next integer 9.
        assert_eq!(compute_d_a(&rat_int(2)).unwrap(), 9);
        // a = 9/4: 16-scaled quadratic 21d² - 364d + 244, larger root ≈ 16.6.
        assert_eq!(compute_d_a(&r(9, 4)).unwrap(), 17);
        // a = 5/2: quadratic d²/4 - 28d + 19, larger root ≈ 111.3.
        assert_eq!(compute_d_a(&r(5, 2)).unwrap(), 112);
        assert!(matches!(
            compute_d_a(&rat_int(3)),
            Err(EchError::AboveThreshold)
        ));
        assert!(matches!(
            compute_d_a(&rat_int(1)),
            Err(EchError::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn no_repeats_holds_on_the_main_instances() {
        for d in 1..=10 {
            assert!(
                no_repeats_check(&rat_int(2), &r(29, 10), d).unwrap(),
                "d = {d}"
            );
            assert!(
                no_repeats_check(&r(5, 2), &r(79, 25), d).unwrap(),
                "d = {d}"
            );
        }
        // d = 10 is the first level where 5d²-6d+1 = 441 is a perfect
        // square; the branch x = 25, y = 4 exists but fails the action test.
        assert_eq!(perfect_sqrt(441), Some(21));
        assert!(matches!(
            no_repeats_check(&rat_int(4), &r(29, 10), 1),
            Err(EchError::ParamOutOfRange(_))
        ));
    }

    #[test]
    fn no_repeats_cross_validated_exhaustively() {
        for d in 1..=6 {
            assert!(no_repeats_exhaustive(&rat_int(2), &r(29, 10), d), "d = {d}");
            assert!(no_repeats_exhaustive(&r(5, 2), &r(79, 25), d), "d = {d}");
        }
    }

    #[test]
    fn repcond_shape_of_diagonal_powers() {
        // For Λ' = e_{1,1}^d: doubled area d² and b = 3d.
        for d in 1..=6 {
            let g = ConvexGenerator::e(1, 1, d);
            assert_eq!(g.doubled_area(), d * d);
            assert_eq!(g.stats().b, 3 * d);
        }
    }

    #[test]
    fn fvm_construction_satisfies_all_constraints() {
        for d in 9..=40 {
            let g = construct_fvm(d).unwrap();
            assert_eq!(g.x() + g.y(), 3 * d - 1, "d = {d}");
            assert_eq!(g.index(), d * (d + 3), "d = {d}");
            assert!(!g.has_h_edges());
        }
        assert!(matches!(
            construct_fvm(8),
            Err(EchError::DomainTooSmall { d: 8 })
        ));
    }

    #[test]
    fn fvm_example_at_d_nine() {
        // 7·81 = 567, k = 23, C = 567 - 529 = 38 ≡ 2 (mod 4):
        // F = (54 - 38)/4 = 4, s = 23, V = (25 - 23)/2 = 1, m = 24 - 4 = 20.
        let g = construct_fvm(9).unwrap();
        assert_eq!(g, "e_{1,0}^4 e_{20,1} e_{0,1}".parse().unwrap());
    }

    #[test]
    fn sharpness_witnesses_for_a_thirteen_fifths() {
        let a = r(13, 5);
        for d in 1..=15 {
            let (epsilon, witness) = sharpness_witness(&a, d).unwrap();
            assert!(epsilon > rat_int(0), "d = {d}");
            let c = rat_int(2) + a.clone() / rat_int(2) - epsilon;
            let polydisk = ToricDomain::Polydisk(a.clone(), rat_int(1));
            let ball = ToricDomain::Ball(c);
            assert!(
                leq(&polydisk, &ball, &witness, &ConvexGenerator::e(1, 1, d)).holds(),
                "d = {d}"
            );
        }
        // the d ≤ 8 closed form at d = 5: F = 6, m = 7
        let (_, w5) = sharpness_witness(&a, 5).unwrap();
        assert_eq!(w5, "e_{1,0}^6 e_{7,1}".parse().unwrap());
        // explicit small cases
        assert_eq!(
            sharpness_witness(&a, 1).unwrap().1,
            ConvexGenerator::e(1, 0, 2)
        );
        assert_eq!(
            sharpness_witness(&a, 2).unwrap().1,
            ConvexGenerator::e(1, 0, 5)
        );
        assert!(matches!(
            sharpness_witness(&rat_int(2), 3),
            Err(EchError::BelowThreshold)
        ));
    }

    #[test]
    fn pipeline_obstructs_the_main_instance() {
        let report = theorem14_pipeline(&PipelineParams {
            a: rat_int(2),
            c: r(29, 10),
            d_max: 1000,
        })
        .unwrap();
        assert_eq!(report.verdict, PipelineVerdict::EmbeddingObstructed);
        assert_eq!(report.d_a, 9);
        assert_eq!(report.n, 3); // N_1 = 1, N_2 = 1, rest empty
        assert_eq!(report.target_level, 4);
        assert_eq!(report.n_d.get(&1), Some(&1));
        assert_eq!(report.n_d.get(&2), Some(&1));
        assert_eq!(report.n_d.get(&3), Some(&0));
        assert!(report.trace.contains("EmbeddingObstructed"));
    }

    #[test]
    fn pipeline_gates_reject_bad_parameters() {
        let run =
            |a: Rational, c: Rational| theorem14_pipeline(&PipelineParams { a, c, d_max: 1000 });
        assert!(matches!(
            run(rat_int(2), rat_int(3)),
            Err(EchError::NotBelowVolumeBound)
        ));
        assert!(matches!(
            run(rat_int(3), r(29, 10)),
            Err(EchError::AboveThreshold)
        ));
        assert!(matches!(
            run(r(3, 2), r(29, 10)),
            Err(EchError::ParamOutOfRange(_))
        ));
        assert!(matches!(run(rat_int(2), r(29, 10)).map(|_| ()), Ok(())));
        // ceiling gate
        assert!(matches!(
            theorem14_pipeline(&PipelineParams {
                a: rat_int(2),
                c: r(29, 10),
                d_max: 3
            }),
            Err(EchError::SearchCeiling { .. })
        ));
    }

    #[test]
    fn pipeline_obstructs_at_five_halves() {
        // 324/100 = 2 + 5/4 - 1/100, just under the folding bound for
        // a = 5/2; the counting bound prunes the search at the root.
        let report = theorem14_pipeline(&PipelineParams {
            a: r(5, 2),
            c: r(324, 100),
            d_max: 1_000_000,
        })
        .unwrap();
        assert_eq!(report.verdict, PipelineVerdict::EmbeddingObstructed);
        assert_eq!(report.d_a, 112);
        assert_eq!(report.target_level, report.n + 1);
        // candidates certifiably stop well below the proof-safe ceiling
        let last_nonempty = report
            .n_d
            .iter()
            .rev()
            .find(|(_, &c)| c > 0)
            .map(|(&d, _)| d);
        assert_eq!(last_nonempty, Some(59));
    }

    #[test]
    fn ceiling_stays_finite_near_the_threshold() {
        // 2.548 is still below (5+sqrt(7))/3 = 2.54858...; the ceiling is
        // large but finite and is returned, not capped.
        let d_a = compute_d_a(&r(2548, 1000)).unwrap();
        assert!(d_a > 1_000, "got {d_a}");
    }

    #[test]
    fn pipeline_verdict_stable_under_larger_ceiling() {
        let run = |d_max: i64| {
            theorem14_pipeline(&PipelineParams {
                a: rat_int(2),
                c: r(29, 10),
                d_max,
            })
            .unwrap()
            .verdict
        };
        assert_eq!(run(100), run(10_000));
    }
}
