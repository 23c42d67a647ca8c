//! Exhaustive consistency sweeps.
//!
//! These drive one implementation route against an independent one over
//! whole boxes of generators: the lattice census against the area formula,
//! the product-index formula against directly computed products, the
//! pairwise product conditions against all-subsets conditions, and the
//! criterion search against an unpruned re-search. The CLI `verify`
//! subcommand and the acceptance suite both run them.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::criterion::{candidates, leq, sub_generators};
use crate::domain::ToricDomain;
use crate::enumerate::{enumerate, EnumBounds};
use crate::generator::{product_index_formula, ConvexGenerator, Direction, Edge, EdgeLabel};

/// Check `2(L - 1) - h` from the direct lattice census against
/// `2A + b - h` from the area route, over every generator (all `e`/`h`
/// labelings) in the box. Returns `(checked, failures)`.
pub fn pick_sweep(max_x: i64, max_y: i64) -> (u64, u64) {
    let mut checked = 0;
    let mut failures = 0;
    crate::enumerate::walk(&EnumBounds::new(max_x, max_y).with_h(), |g| {
        let census = g.lattice_count();
        let stats = g.stats();
        checked += 1;
        let census_index = 2 * (census.total - 1) - stats.h;
        if census_index != stats.index || census.total != stats.lattice_points {
            failures += 1;
        }
    });
    (checked, failures)
}

/// Check the product-index formula against the index of the directly
/// concatenated product over every ordered pair from the box whose product
/// is defined. Returns `(checked, failures)`.
pub fn product_formula_sweep(max_x: i64, max_y: i64) -> (u64, u64) {
    let gens = enumerate(&EnumBounds::new(max_x, max_y).with_h());
    let mut checked = 0;
    let mut failures = 0;
    for g1 in &gens {
        for g2 in &gens {
            if g1.shares_hyperbolic_orbit(g2) {
                continue;
            }
            checked += 1;
            let direct = g1.product(g2).expect("no shared h").index();
            if product_index_formula(g1, g2).expect("no shared h") != direct {
                failures += 1;
            }
        }
    }
    (checked, failures)
}

/// Same check over `samples` pseudo-random pairs from the box, with a fixed
/// seed for reproducibility. Returns `(checked, failures)`.
pub fn product_formula_random_sweep(max_x: i64, max_y: i64, samples: u64, seed: u64) -> (u64, u64) {
    let mut rng = SplitMix::new(seed);
    let mut checked = 0;
    let mut failures = 0;
    while checked < samples {
        let g1 = random_generator(&mut rng, max_x, max_y);
        let g2 = random_generator(&mut rng, max_x, max_y);
        if g1.shares_hyperbolic_orbit(&g2) {
            continue;
        }
        checked += 1;
        let direct = g1.product(&g2).expect("no shared h").index();
        if product_index_formula(&g1, &g2).expect("no shared h") != direct {
            failures += 1;
        }
    }
    (checked, failures)
}

/// Deterministic 64-bit generator (splitmix64 step), enough for sampling
/// test inputs.
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }
}

/// Random generator within the box: a few random coprime directions with
/// random multiplicities and labels.
pub fn random_generator(rng: &mut SplitMix, max_x: i64, max_y: i64) -> ConvexGenerator {
    let dirs = crate::enumerate::directions_in_box(max_x, max_y);
    let mut g = ConvexGenerator::trivial();
    let mut rem_x = max_x;
    let mut rem_y = max_y;
    let edges = 1 + rng.below(3);
    for _ in 0..edges {
        let dir = dirs[rng.below(dirs.len() as u64) as usize];
        if dir.a > rem_x || dir.b > rem_y || g.edges().any(|e| e.direction == dir) {
            continue;
        }
        let max_mult = if dir.a == 0 {
            rem_y / dir.b
        } else if dir.b == 0 {
            rem_x / dir.a
        } else {
            (rem_x / dir.a).min(rem_y / dir.b)
        };
        let mult = 1 + rng.below(max_mult as u64) as i64;
        let with_h = !dir.is_axis() && rng.below(2) == 1;
        let label = if with_h { EdgeLabel::H } else { EdgeLabel::E };
        g.push_edge(Edge {
            direction: dir,
            multiplicity: mult,
            label,
        })
        .expect("fresh direction");
        rem_x -= mult * dir.a;
        rem_y -= mult * dir.b;
    }
    g
}

/// Result of the pairwise-to-subsets family sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySweep {
    pub generators: usize,
    pub matched_pairs: usize,
    pub families_checked: u64,
    pub failures: u64,
    /// False when a family budget cut the walk short.
    pub exhausted: bool,
}

/// Exhaustive check of the pairwise-to-subsets reduction over a box.
///
/// Families are multisets of slots `(g_i, g'_i)` with `I(g_i) = I(g'_i)`,
/// no hyperbolic orbit shared inside either list, and all pairwise product
/// indices equal. For each family of size 3 up to `n_max` containing at
/// least one slot with `g_i ≠ g'_i`, the full products of the two lists
/// must have equal index, computed directly. Proper subsets of a family
/// are themselves families (the hypotheses restrict), so checking full
/// products at every size covers all `2^n` subsets; subsets made of
/// identical slots compare a product with itself.
pub fn subset_family_sweep(max_x: i64, max_y: i64, n_max: usize) -> FamilySweep {
    subset_family_sweep_budgeted(max_x, max_y, n_max, None)
}

/// [`subset_family_sweep`] with an optional cap on the number of families
/// checked; the walk order is deterministic, so a budgeted run always
/// covers the same prefix.
pub fn subset_family_sweep_budgeted(
    max_x: i64,
    max_y: i64,
    n_max: usize,
    budget: Option<u64>,
) -> FamilySweep {
    let gens: Vec<ConvexGenerator> = enumerate(&EnumBounds::new(max_x, max_y).with_h())
        .into_iter()
        .filter(|g| !g.is_trivial())
        .collect();

    // All index-matched ordered slots, identical ones included.
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            if gi.index() == gj.index() {
                slots.push((i, j));
            }
        }
    }

    // Slot compatibility: lists stay internally h-disjoint and the pairwise
    // product indices agree. The diagonal marks slots that may repeat.
    let words = slots.len().div_ceil(64);
    let mut compat: Vec<Vec<u64>> = alloc::vec![alloc::vec![0u64; words]; slots.len()];
    for (p, &(i1, j1)) in slots.iter().enumerate() {
        for (q, &(i2, j2)) in slots.iter().enumerate().skip(p) {
            if gens[i1].shares_hyperbolic_orbit(&gens[i2])
                || gens[j1].shares_hyperbolic_orbit(&gens[j2])
            {
                continue;
            }
            let lhs = gens[i1].product(&gens[i2]).expect("h-disjoint").index();
            let rhs = gens[j1].product(&gens[j2]).expect("h-disjoint").index();
            if lhs == rhs {
                compat[p][q / 64] |= 1 << (q % 64);
                compat[q][p / 64] |= 1 << (p % 64);
            }
        }
    }

    let mut sweep = FamilySweep {
        generators: gens.len(),
        matched_pairs: slots.len(),
        families_checked: 0,
        failures: 0,
        exhausted: true,
    };
    let full: Vec<u64> = alloc::vec![!0u64; words];
    let mut ctx = FamilyCtx {
        gens: &gens,
        slots: &slots,
        compat: &compat,
        n_max,
        budget,
        sweep: &mut sweep,
    };
    let trivial = ConvexGenerator::trivial();
    family_dfs(&mut ctx, 0, &full, &trivial, &trivial, 0, 0);
    sweep
}

struct FamilyCtx<'a> {
    gens: &'a [ConvexGenerator],
    slots: &'a [(usize, usize)],
    compat: &'a [Vec<u64>],
    n_max: usize,
    budget: Option<u64>,
    sweep: &'a mut FamilySweep,
}

#[allow(clippy::too_many_arguments)]
fn family_dfs(
    ctx: &mut FamilyCtx<'_>,
    start: usize,
    allowed: &[u64],
    prod_g: &ConvexGenerator,
    prod_gp: &ConvexGenerator,
    depth: usize,
    mixed: usize,
) {
    if depth == ctx.n_max || !ctx.sweep.exhausted {
        return;
    }
    for word in (start / 64)..allowed.len() {
        let mut bits = allowed[word];
        if word == start / 64 {
            bits &= !0u64 << (start % 64);
        }
        while bits != 0 {
            let bit = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let q = word * 64 + bit;
            if q >= ctx.slots.len() {
                break;
            }
            if ctx.budget.is_some_and(|b| ctx.sweep.families_checked >= b) {
                ctx.sweep.exhausted = false;
                return;
            }
            let (i, j) = ctx.slots[q];
            let next_g = prod_g
                .product(&ctx.gens[i])
                .expect("compat keeps products defined");
            let next_gp = prod_gp
                .product(&ctx.gens[j])
                .expect("compat keeps products defined");
            let next_mixed = mixed + usize::from(i != j);
            if depth + 1 >= 3 && next_mixed > 0 {
                ctx.sweep.families_checked += 1;
                if next_g.index() != next_gp.index() {
                    ctx.sweep.failures += 1;
                }
            }
            if depth + 1 < ctx.n_max {
                let next_allowed: Vec<u64> = allowed
                    .iter()
                    .zip(&ctx.compat[q])
                    .map(|(a, c)| a & c)
                    .collect();
                family_dfs(
                    ctx,
                    q,
                    &next_allowed,
                    &next_g,
                    &next_gp,
                    depth + 1,
                    next_mixed,
                );
            }
        }
    }
}

/// Every satisfying assignment of the criterion conditions for an all-`e`
/// target, by unpruned exhaustive search: covers of the target's edge
/// multiset by `(part, candidate)` slots, filtered by the given pair rule.
/// Assignments are returned as canonically sorted lists of printed pairs.
///
/// This is the independent re-check behind `Obstructed` verdicts and the
/// ground for comparing the pairwise rule against the all-subsets rule and
/// against the restated elliptic condition.
pub fn exhaustive_witnesses(
    from: &ToricDomain,
    to: &ToricDomain,
    target: &ConvexGenerator,
    rule: PairRule,
) -> BTreeSet<Vec<(String, String)>> {
    assert!(!target.has_h_edges());
    let parts = sub_generators(target);
    let mut items: Vec<(ConvexGenerator, ConvexGenerator)> = Vec::new();
    for part in &parts {
        for cand in candidates(from, to, part) {
            debug_assert!(leq(from, to, &cand, part).holds());
            items.push((part.clone(), cand));
        }
    }
    let dirs: Vec<Direction> = target.edges().map(|e| e.direction).collect();
    let target_vec: Vec<i64> = target.edges().map(|e| e.multiplicity).collect();
    let item_vecs: Vec<Vec<i64>> = items
        .iter()
        .map(|(part, _)| {
            dirs.iter()
                .map(|d| {
                    part.edges()
                        .find(|e| e.direction == *d)
                        .map_or(0, |e| e.multiplicity)
                })
                .collect()
        })
        .collect();

    let mut found = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    covers(
        &items,
        &item_vecs,
        0,
        &mut target_vec.clone(),
        &mut chosen,
        &mut |assignment: &[usize]| {
            let witness: Vec<&(ConvexGenerator, ConvexGenerator)> =
                assignment.iter().map(|&k| &items[k]).collect();
            if assignment_satisfies(&witness, rule) {
                let canonical: Vec<(String, String)> = {
                    let mut v: Vec<(String, String)> = witness
                        .iter()
                        .map(|(p, c)| (p.to_string(), c.to_string()))
                        .collect();
                    v.sort();
                    v
                };
                found.insert(canonical);
            }
        },
    );
    found
}

/// Pair condition used when filtering assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRule {
    /// No shared elliptic orbit for distinct pairs; pairwise product
    /// indices equal.
    Pairwise,
    /// No shared elliptic orbit for distinct pairs; all `2^n` subset
    /// product indices equal (computed directly).
    SubsetsDirect,
    /// Restated elliptic condition: factors sharing an elliptic orbit
    /// `e_{x,y}` must both equal `e_{x,y}`; pairwise product indices equal.
    PairwiseRestatedElliptic,
}

fn assignment_satisfies(witness: &[&(ConvexGenerator, ConvexGenerator)], rule: PairRule) -> bool {
    let n = witness.len();
    // products must all be defined
    for i in 0..n {
        for j in (i + 1)..n {
            if witness[i].1.shares_hyperbolic_orbit(&witness[j].1) {
                return false;
            }
        }
    }
    // elliptic condition
    for i in 0..n {
        for j in (i + 1)..n {
            let (pi, ci) = witness[i];
            let (pj, cj) = witness[j];
            if !ci.shares_elliptic_orbit(cj) {
                continue;
            }
            let allowed = match rule {
                PairRule::Pairwise | PairRule::SubsetsDirect => pi == pj && ci == cj,
                PairRule::PairwiseRestatedElliptic => {
                    ci == cj && ci.edge_count() == 1 && ci.total_multiplicity() == 1
                }
            };
            if !allowed {
                return false;
            }
        }
    }
    // index condition
    match rule {
        PairRule::Pairwise | PairRule::PairwiseRestatedElliptic => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let lhs = witness[i]
                        .1
                        .product(&witness[j].1)
                        .expect("checked")
                        .index();
                    let rhs = witness[i].0.product(&witness[j].0).expect("all-e").index();
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            true
        }
        PairRule::SubsetsDirect => {
            assert!(n <= 16);
            for mask in 0u32..(1 << n) {
                let mut lhs = ConvexGenerator::trivial();
                let mut rhs = ConvexGenerator::trivial();
                for (i, w) in witness.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        lhs = lhs.product(&w.1).expect("checked");
                        rhs = rhs.product(&w.0).expect("all-e");
                    }
                }
                if lhs.index() != rhs.index() {
                    return false;
                }
            }
            true
        }
    }
}

fn covers(
    items: &[(ConvexGenerator, ConvexGenerator)],
    item_vecs: &[Vec<i64>],
    from: usize,
    remaining: &mut Vec<i64>,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if remaining.iter().all(|&r| r == 0) {
        emit(chosen);
        return;
    }
    if from == items.len() {
        return;
    }
    // skip this item entirely
    covers(items, item_vecs, from + 1, remaining, chosen, emit);
    // or take it (possibly again later, which re-enters at `from`)
    if item_vecs[from]
        .iter()
        .zip(remaining.iter())
        .all(|(&need, &have)| need <= have)
    {
        for (r, &need) in remaining.iter_mut().zip(&item_vecs[from]) {
            *r -= need;
        }
        chosen.push(from);
        covers(items, item_vecs, from, remaining, chosen, emit);
        chosen.pop();
        for (r, &need) in remaining.iter_mut().zip(&item_vecs[from]) {
            *r += need;
        }
    }
}

/// Whether the three pair rules accept exactly the same assignment sets
/// for the given configuration.
pub fn criterion_rules_agree(
    from: &ToricDomain,
    to: &ToricDomain,
    target: &ConvexGenerator,
) -> bool {
    let pairwise = exhaustive_witnesses(from, to, target, PairRule::Pairwise);
    let subsets = exhaustive_witnesses(from, to, target, PairRule::SubsetsDirect);
    let restated = exhaustive_witnesses(from, to, target, PairRule::PairwiseRestatedElliptic);
    pairwise == subsets && pairwise == restated
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn pick_sweep_clean_on_small_box() {
        let (checked, failures) = pick_sweep(4, 4);
        assert!(checked > 100);
        assert_eq!(failures, 0);
    }

    #[test]
    fn product_formula_sweep_clean_on_small_box() {
        let (checked, failures) = product_formula_sweep(2, 2);
        assert!(checked > 100);
        assert_eq!(failures, 0);
        let (checked, failures) = product_formula_random_sweep(8, 8, 300, 7);
        assert_eq!(checked, 300);
        assert_eq!(failures, 0);
    }

    #[test]
    fn random_sweep_is_deterministic() {
        let a = product_formula_random_sweep(6, 6, 50, 42);
        let b = product_formula_random_sweep(6, 6, 50, 42);
        assert_eq!(a, b);
    }

    #[test]
    fn family_sweep_clean_on_two_box() {
        let sweep = subset_family_sweep(2, 2, 3);
        assert_eq!(sweep.failures, 0);
        assert!(sweep.families_checked > 0);
    }

    #[test]
    fn obstructed_instance_has_no_exhaustive_witnesses() {
        let from: ToricDomain = "P(2,1)".parse().unwrap();
        let to = ToricDomain::Ball(rat(29, 10));
        let target = ConvexGenerator::e(1, 1, 4);
        let set = exhaustive_witnesses(&from, &to, &target, PairRule::Pairwise);
        assert!(set.is_empty());
    }

    #[test]
    fn pair_rules_agree_on_small_instances() {
        let p21: ToricDomain = "P(2,1)".parse().unwrap();
        let p11: ToricDomain = "P(1,1)".parse().unwrap();
        for (from, to, d) in [
            (&p21, ToricDomain::Ball(rat(29, 10)), 2),
            (&p21, ToricDomain::Ball(rat(29, 10)), 3),
            (&p21, ToricDomain::Ball(rat(3, 1)), 3),
            (&p21, ToricDomain::Ball(rat(3, 1)), 4),
            (&p11, ToricDomain::Ball(rat(2, 1)), 2),
        ] {
            assert!(
                criterion_rules_agree(from, &to, &ConvexGenerator::e(1, 1, d)),
                "target d = {d} into {to}"
            );
        }
    }

    #[test]
    fn subset_oracle_true_on_every_swept_triple() {
        // Wire the 2x2 family space through the subset oracle itself: every
        // index-matched triple whose lists are internally h-disjoint and
        // whose pairwise product indices agree must pass all 2^3 subsets.
        let gens: Vec<ConvexGenerator> = enumerate(&EnumBounds::new(2, 2).with_h())
            .into_iter()
            .filter(|g| !g.is_trivial())
            .collect();
        let mut slots: Vec<(usize, usize)> = Vec::new();
        for (i, gi) in gens.iter().enumerate() {
            for (j, gj) in gens.iter().enumerate() {
                if gi.index() == gj.index() {
                    slots.push((i, j));
                }
            }
        }
        let mut triples_checked = 0u64;
        for (s1, &(a1, b1)) in slots.iter().enumerate() {
            for (s2, &(a2, b2)) in slots.iter().enumerate().skip(s1) {
                for &(a3, b3) in slots.iter().skip(s2) {
                    let left = [gens[a1].clone(), gens[a2].clone(), gens[a3].clone()];
                    let right = [gens[b1].clone(), gens[b2].clone(), gens[b3].clone()];
                    // premise failures claim nothing; passing premises
                    // must yield equality on all subsets
                    if let Ok(all_equal) = crate::criterion::subset_oracle(&left, &right) {
                        triples_checked += 1;
                        assert!(all_equal, "{left:?} vs {right:?}");
                    }
                }
            }
        }
        assert!(triples_checked > 1_000);
    }
}
