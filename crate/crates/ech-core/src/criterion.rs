//! The cobordism partial order on convex generators and the embedding
//! criterion as a complete backtracking search.
//!
//! `lhs ≤ rhs` relative to a pair of domains requires equal ECH index, the
//! action inequality, and the genus-derived endpoint inequality. A
//! symplectic embedding forces, for every minimal generator `Λ'` of the
//! target domain, a factorization `Λ' = Λ'_1 ⋯ Λ'_n` together with
//! generators `Λ_i ≤ Λ'_i` such that distinct factor pairs share no
//! elliptic orbit and all pairwise products have equal indices. The search
//! here enumerates those factorizations completely: if it exhausts, the
//! embedding is obstructed.
//!
//! Checking pairwise products instead of all `2^n` subset products is what
//! keeps the search quadratic per assignment; the subset form survives only
//! in [`subset_oracle`], which exists to validate the reduction.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::capacity::minimal_generators;
use crate::domain::ToricDomain;
use crate::enumerate::directions_in_box;
use crate::error::{EchError, Result};
use crate::generator::{product_index_formula, ConvexGenerator, Direction, Edge, EdgeLabel};
use crate::rational::{floor_to_i64, Rational};

/// The three conditions of `lhs ≤_{Ω,Ω'} rhs`, evaluated separately.
#[derive(Clone, Debug)]
pub struct LeqWitness {
    pub lhs: ConvexGenerator,
    pub rhs: ConvexGenerator,
    /// `I(lhs) = I(rhs)`.
    pub index_ok: bool,
    /// `A_Ω(lhs) ≤ A_{Ω'}(rhs)`.
    pub action_ok: bool,
    /// `x + y - h/2 ≥ x' + y' + m' - 1`, doubled to stay integral.
    pub genus_ok: bool,
}

impl LeqWitness {
    pub fn holds(&self) -> bool {
        self.index_ok && self.action_ok && self.genus_ok
    }
}

/// Evaluate the relation `lhs ≤ rhs` with respect to domains `(from, to)`.
pub fn leq(
    from: &ToricDomain,
    to: &ToricDomain,
    lhs: &ConvexGenerator,
    rhs: &ConvexGenerator,
) -> LeqWitness {
    let index_ok = lhs.index() == rhs.index();
    let action_ok = from.action(lhs) <= to.action(rhs);
    let genus_ok = 2 * lhs.x() + 2 * lhs.y() - lhs.h_count() >= genus_requirement2(rhs);
    LeqWitness {
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        index_ok,
        action_ok,
        genus_ok,
    }
}

/// Doubled right-hand side of the genus inequality: `2(x' + y' + m' - 1)`.
fn genus_requirement2(rhs: &ConvexGenerator) -> i64 {
    2 * (rhs.x() + rhs.y() + rhs.total_multiplicity() - 1)
}

/// Every generator `Λ` with `Λ ≤ rhs`, in lexicographic order of the
/// printed form. `rhs` must be all-`e`.
///
/// Completeness: the action condition bounds the endpoints (`x ≤ cap /
/// height(Ω)`, `y ≤ cap / width(Ω)`), so the enumeration over endpoint
/// pairs with an exact-index path search inside each cell covers every
/// possibility. At each endpoint pair three necessary filters apply before
/// any path is walked: the genus inequality at `h = 0`, the bounding-box
/// index bound `I ≤ 2(x+1)(y+1) - 2`, and (for a polydisk source, where
/// the action depends only on the endpoints) the action cap itself.
pub fn candidates(
    from: &ToricDomain,
    to: &ToricDomain,
    rhs: &ConvexGenerator,
) -> Vec<ConvexGenerator> {
    assert!(!rhs.has_h_edges(), "the relation target must be all-e");
    let target_index = rhs.index();
    let action_cap = to.action(rhs);
    let genus_need2 = genus_requirement2(rhs);
    collect_candidates(from, target_index, &action_cap, genus_need2)
}

fn collect_candidates(
    from: &ToricDomain,
    target_index: i64,
    action_cap: &Rational,
    genus_need2: i64,
) -> Vec<ConvexGenerator> {
    let x_cap = floor_to_i64(&(action_cap / from.height()));
    let y_cap = floor_to_i64(&(action_cap / from.width()));
    let polydisk = match from {
        ToricDomain::Polydisk(a, b) => Some((a.clone(), b.clone())),
        _ => None,
    };
    let dirs = directions_in_box(x_cap, y_cap);
    let mut found: Vec<(String, ConvexGenerator)> = Vec::new();

    for y in 0..=y_cap {
        let x_hi = match &polydisk {
            Some((a, b)) => {
                let slack = action_cap - a * crate::rational::rat_int(y);
                if slack < crate::rational::zero() {
                    break; // larger y only worse
                }
                floor_to_i64(&(slack / b.clone())).min(x_cap)
            }
            None => x_cap,
        };
        let x_lo_genus = (genus_need2 / 2 - y).max(0);
        let row = 2 * (y + 1);
        let x_lo_rect = ((target_index + 2 + row - 1) / row - 1).max(0);
        let x_lo = x_lo_genus.max(x_lo_rect);
        for x in x_lo..=x_hi {
            cell_paths(
                x,
                y,
                target_index,
                &dirs,
                &mut |edges, index_all_e, eligible| {
                    let h_need = index_all_e - target_index;
                    if h_need < 0 || h_need > eligible.len() as i64 {
                        return;
                    }
                    if 2 * (x + y) - h_need < genus_need2 {
                        return;
                    }
                    if polydisk.is_none() {
                        let path = ConvexGenerator::from_edges(edges.iter().copied())
                            .expect("cell paths are valid");
                        if from.action(&path) > *action_cap {
                            return;
                        }
                    }
                    for_each_combination(eligible, h_need as usize, &mut |chosen| {
                        let labeled = ConvexGenerator::from_edges(edges.iter().map(|e| Edge {
                            label: if chosen.contains(&e.direction) {
                                EdgeLabel::H
                            } else {
                                EdgeLabel::E
                            },
                            ..*e
                        }))
                        .expect("labeling preserves validity");
                        found.push((labeled.to_string(), labeled));
                    });
                },
            );
        }
    }
    found.sort_unstable_by(|(a, _), (b, _)| a.cmp(b));
    found.into_iter().map(|(_, g)| g).collect()
}

/// Walk every convex path from `(0, y)` to `(x, 0)`, reporting the edge
/// list, its all-`e` index, and the `h`-eligible directions. Pruned by the
/// best- and worst-case index still reachable from a partial path: the
/// remainder can at most fill the rectangle under the current position and
/// at least cover the chord to `(x, 0)`.
fn cell_paths(
    x: i64,
    y: i64,
    target_index: i64,
    dirs: &[Direction],
    visit: &mut impl FnMut(&[Edge], i64, &[Direction]),
) {
    struct Ctx<'a, F> {
        x: i64,
        y: i64,
        target: i64,
        dirs: &'a [Direction],
        visit: &'a mut F,
        stack: Vec<Edge>,
        eligible: Vec<Direction>,
    }

    fn rec<F: FnMut(&[Edge], i64, &[Direction])>(
        ctx: &mut Ctx<'_, F>,
        from: usize,
        cx: i64,
        cy: i64,
        area2: i64,
        m: i64,
    ) {
        let dx_rem = ctx.x - cx;
        if dx_rem == 0 && cy == 0 {
            let index_all_e = area2 + ctx.x + ctx.y + m;
            (ctx.visit)(&ctx.stack, index_all_e, &ctx.eligible);
            return;
        }
        let best = area2 + 2 * dx_rem * cy + ctx.x + ctx.y + m + dx_rem + cy;
        if best < ctx.target {
            return;
        }
        let worst = area2 + dx_rem * cy + ctx.x + ctx.y + m + 1;
        let h_allowance = ctx.eligible.len() as i64 + dx_rem.min(cy);
        if worst > ctx.target + h_allowance {
            return;
        }
        for (offset, &dir) in ctx.dirs[from..].iter().enumerate() {
            let i = from + offset;
            if dir.a > dx_rem || dir.b > cy {
                continue;
            }
            let mut mult = 1;
            while mult * dir.a <= dx_rem && mult * dir.b <= cy {
                let (dx, dy) = (mult * dir.a, mult * dir.b);
                ctx.stack.push(Edge {
                    direction: dir,
                    multiplicity: mult,
                    label: EdgeLabel::E,
                });
                if !dir.is_axis() {
                    ctx.eligible.push(dir);
                }
                rec(
                    ctx,
                    i + 1,
                    cx + dx,
                    cy - dy,
                    area2 + dx * (2 * cy - dy),
                    m + mult,
                );
                if !dir.is_axis() {
                    ctx.eligible.pop();
                }
                ctx.stack.pop();
                mult += 1;
            }
        }
    }

    let mut ctx = Ctx {
        x,
        y,
        target: target_index,
        dirs,
        visit,
        stack: Vec::new(),
        eligible: Vec::new(),
    };
    rec(&mut ctx, 0, 0, y, 0, 0);
}

fn for_each_combination(pool: &[Direction], k: usize, f: &mut impl FnMut(&[Direction])) {
    fn rec(
        pool: &[Direction],
        k: usize,
        start: usize,
        chosen: &mut Vec<Direction>,
        f: &mut impl FnMut(&[Direction]),
    ) {
        if chosen.len() == k {
            f(chosen);
            return;
        }
        let needed = k - chosen.len();
        for i in start..=pool.len().saturating_sub(needed) {
            chosen.push(pool[i]);
            rec(pool, k, i + 1, chosen, f);
            chosen.pop();
        }
    }
    if k > pool.len() {
        return;
    }
    rec(pool, k, 0, &mut Vec::new(), f)
}

/// Configuration of one criterion run.
#[derive(Clone, Debug)]
pub struct CriterionConfig {
    pub domain_from: ToricDomain,
    pub domain_to: ToricDomain,
    /// All-`e` generator, minimal for `domain_to` (checked).
    pub target: ConvexGenerator,
    /// Cap on the number of factors `n`; `None` leaves it bounded only by
    /// the factorization itself. With a cap set, an `Obstructed` outcome
    /// only says no witness exists within the capped search.
    pub max_parts: Option<usize>,
    /// Skip repeated identical `(Λ'_i, Λ_i)` pairs. Only sound where the
    /// no-repeats statement holds (the polydisk-into-ball pipeline turns it
    /// on after verifying that statement); off by default.
    pub no_repeats_pruning: bool,
    /// Placeholder for the relaxed criterion accepting non-minimal all-`e`
    /// targets; recognized and rejected at runtime.
    pub improved_criterion: bool,
    /// Skip factor parts whose index exceeds this value. Only sound when
    /// the caller has established that such parts have empty candidate
    /// sets (the pipeline proves and cross-checks its ceiling); `None`
    /// considers every part.
    pub part_index_cap: Option<i64>,
}

impl CriterionConfig {
    pub fn new(domain_from: ToricDomain, domain_to: ToricDomain, target: ConvexGenerator) -> Self {
        CriterionConfig {
            domain_from,
            domain_to,
            target,
            max_parts: None,
            no_repeats_pruning: false,
            improved_criterion: false,
            part_index_cap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The search exhausted: no factorization satisfies the criterion, so
    /// the embedding is impossible.
    Obstructed,
    /// A satisfying assignment exists; the criterion does not obstruct.
    /// This never claims an embedding exists.
    WitnessFound,
}

/// Result of a criterion run. A found witness carries the factor pairs
/// `(Λ'_i, Λ_i)` and has been re-verified against all three conditions.
#[derive(Clone, Debug)]
pub struct ObstructionReport {
    pub outcome: Outcome,
    pub witness: Option<Vec<(ConvexGenerator, ConvexGenerator)>>,
    pub nodes_explored: u64,
    pub candidates_per_part: BTreeMap<String, usize>,
}

/// Complete search over factorizations of the target and candidate
/// assignments.
///
/// Factor parts run over the nonempty sub-products of the target (for a
/// diagonal power `e_{1,1}^d` these are exactly the integer partitions of
/// `d`), largest index first; within a part, candidates are ordered by
/// action. Identical `(part, candidate)` pairs may repeat — condition (ii)
/// exempts them — provided the candidate is `h`-free and its self-product
/// index matches the part's; distinct pairs must share no orbit at all and
/// must satisfy the pairwise product-index equality.
pub fn run_criterion(cfg: &CriterionConfig) -> Result<ObstructionReport> {
    if cfg.improved_criterion {
        return Err(EchError::Unsupported(
            "the relaxed criterion for non-minimal all-e targets (config flag \
             `improved_criterion`) is recognized but not implemented",
        ));
    }
    if cfg.target.has_h_edges() {
        return Err(EchError::ParamOutOfRange(
            "criterion target must be all-e".into(),
        ));
    }
    if !is_minimal(&cfg.domain_to, &cfg.target) {
        return Err(EchError::TargetNotMinimal);
    }
    if cfg.target.is_trivial() {
        return Ok(ObstructionReport {
            outcome: Outcome::WitnessFound,
            witness: Some(vec![]),
            nodes_explored: 0,
            candidates_per_part: BTreeMap::new(),
        });
    }

    let parts: Vec<ConvexGenerator> = sub_generators(&cfg.target)
        .into_iter()
        .filter(|p| cfg.part_index_cap.is_none_or(|cap| p.index() <= cap))
        .collect();
    let mut candidates_per_part = BTreeMap::new();
    let mut items: Vec<Item> = Vec::new();
    for part in &parts {
        let cands = candidates(&cfg.domain_from, &cfg.domain_to, part);
        candidates_per_part.insert(part.to_string(), cands.len());
        let mut ordered: Vec<(Rational, String, ConvexGenerator)> = cands
            .into_iter()
            .map(|c| (cfg.domain_from.action(&c), c.to_string(), c))
            .collect();
        ordered.sort_by(|(a1, n1, _), (a2, n2, _)| a1.cmp(a2).then_with(|| n1.cmp(n2)));
        for (_, _, cand) in ordered {
            items.push(Item::new(part, cand));
        }
    }

    let target_dirs: Vec<Direction> = cfg.target.edges().map(|e| e.direction).collect();
    let target_vec: Vec<i64> = cfg.target.edges().map(|e| e.multiplicity).collect();
    for item in &mut items {
        item.part_vec = target_dirs
            .iter()
            .map(|d| {
                item.part
                    .edges()
                    .find(|e| e.direction == *d)
                    .map_or(0, |e| e.multiplicity)
            })
            .collect();
    }

    // Per-direction totals still available from item i onward, counting
    // each item once (used when repeats are pruned), plus reachability.
    let n_dirs = target_dirs.len();
    let mut suffix_once: Vec<Vec<i64>> = vec![vec![0; n_dirs]; items.len() + 1];
    for i in (0..items.len()).rev() {
        suffix_once[i] = suffix_once[i + 1]
            .iter()
            .zip(&items[i].part_vec)
            .map(|(&tail, &here)| tail + here)
            .collect();
    }

    let mut search = Search {
        items: &items,
        compat_memo: BTreeMap::new(),
        suffix_once: &suffix_once,
        no_repeats: cfg.no_repeats_pruning,
        max_parts: cfg.max_parts,
        nodes: 0,
    };
    let mut remaining = target_vec.clone();
    let mut used: Vec<(usize, i64)> = Vec::new();
    let witness_items = search.dfs(0, &mut remaining, &mut used);
    let nodes_explored = search.nodes;

    match witness_items {
        Some(chosen) => {
            let mut witness: Vec<(ConvexGenerator, ConvexGenerator)> = Vec::new();
            for (idx, count) in chosen {
                for _ in 0..count {
                    witness.push((items[idx].part.clone(), items[idx].cand.clone()));
                }
            }
            assert!(
                verify_witness(cfg, &witness),
                "search produced a witness that fails re-verification"
            );
            Ok(ObstructionReport {
                outcome: Outcome::WitnessFound,
                witness: Some(witness),
                nodes_explored,
                candidates_per_part,
            })
        }
        None => Ok(ObstructionReport {
            outcome: Outcome::Obstructed,
            witness: None,
            nodes_explored,
            candidates_per_part,
        }),
    }
}

struct Item {
    part: ConvexGenerator,
    cand: ConvexGenerator,
    part_vec: Vec<i64>,
    /// Whether the pair may appear with multiplicity ≥ 2: the candidate's
    /// self-product must be defined and match the part's self-product index.
    self_ok: bool,
}

impl Item {
    fn new(part: &ConvexGenerator, cand: ConvexGenerator) -> Self {
        let self_ok = !cand.has_h_edges()
            && product_index_formula(&cand, &cand).expect("h-free")
                == product_index_formula(part, part).expect("parts are all-e");
        Item {
            part: part.clone(),
            cand,
            part_vec: Vec::new(),
            self_ok,
        }
    }
}

fn items_compatible(a: &Item, b: &Item) -> bool {
    if a.cand.shares_hyperbolic_orbit(&b.cand) {
        return false; // product of the two factors undefined
    }
    if a.cand.shares_elliptic_orbit(&b.cand) {
        return false; // condition (ii) for distinct pairs
    }
    let lhs = product_index_formula(&a.cand, &b.cand).expect("disjoint orbits");
    let rhs = product_index_formula(&a.part, &b.part).expect("parts are all-e");
    lhs == rhs
}

struct Search<'a> {
    items: &'a [Item],
    /// Pairwise compatibility of items, filled on demand: distinct factor
    /// pairs must share no elliptic orbit (condition ii), their product
    /// must be defined (no shared hyperbolic orbit), and the pairwise
    /// indices must match (condition iii), via the product-index formula.
    compat_memo: BTreeMap<(usize, usize), bool>,
    suffix_once: &'a [Vec<i64>],
    no_repeats: bool,
    max_parts: Option<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn compat(&mut self, i: usize, j: usize) -> bool {
        let key = (i.min(j), i.max(j));
        if let Some(&known) = self.compat_memo.get(&key) {
            return known;
        }
        let value = items_compatible(&self.items[key.0], &self.items[key.1]);
        self.compat_memo.insert(key, value);
        value
    }

    fn dfs(
        &mut self,
        i: usize,
        remaining: &mut Vec<i64>,
        used: &mut Vec<(usize, i64)>,
    ) -> Option<Vec<(usize, i64)>> {
        if remaining.iter().all(|&r| r == 0) {
            return Some(used.clone());
        }
        if i == self.items.len() {
            return None;
        }
        if self.no_repeats {
            // With each item usable at most once, the suffix totals bound
            // what is still coverable.
            if remaining
                .iter()
                .zip(&self.suffix_once[i])
                .any(|(&need, &have)| need > have)
            {
                return None;
            }
        } else if remaining
            .iter()
            .enumerate()
            .any(|(d, &need)| need > 0 && self.items[i..].iter().all(|it| it.part_vec[d] == 0))
        {
            return None;
        }

        let item = &self.items[i];
        let mut max_count = i64::MAX;
        for (d, &need) in remaining.iter().enumerate() {
            if item.part_vec[d] > 0 {
                max_count = max_count.min(need / item.part_vec[d]);
            }
        }
        if max_count == i64::MAX {
            max_count = 0; // empty part cannot occur, but stay safe
        }
        if self.no_repeats || !item.self_ok {
            max_count = max_count.min(1);
        }
        if let Some(cap) = self.max_parts {
            let used_n: i64 = used.iter().map(|(_, c)| c).sum();
            max_count = max_count.min(cap as i64 - used_n);
        }
        let partners: Vec<usize> = used.iter().map(|&(j, _)| j).collect();
        let compatible_with_used = partners.into_iter().all(|j| self.compat(i, j));

        let mut count = max_count.max(0);
        loop {
            if count > 0 && !compatible_with_used {
                count = 0;
                continue;
            }
            if count > 0 {
                self.nodes += 1;
            }
            for (d, r) in remaining.iter_mut().enumerate() {
                *r -= count * item.part_vec[d];
            }
            if count > 0 {
                used.push((i, count));
            }
            let found = self.dfs(i + 1, remaining, used);
            if count > 0 {
                used.pop();
            }
            for (d, r) in remaining.iter_mut().enumerate() {
                *r += count * item.part_vec[d];
            }
            if found.is_some() {
                return found;
            }
            if count == 0 {
                return None;
            }
            count -= 1;
        }
    }
}

/// All nonempty sub-products of a generator (choices of multiplicity per
/// direction), largest index first.
pub fn sub_generators(target: &ConvexGenerator) -> Vec<ConvexGenerator> {
    let edges: Vec<Edge> = target.edges().collect();
    let mut out: Vec<ConvexGenerator> = Vec::new();
    let mut choice: Vec<i64> = vec![0; edges.len()];
    loop {
        // advance the per-direction multiplicity vector like a counter
        let mut pos = 0;
        while pos < edges.len() {
            if choice[pos] < edges[pos].multiplicity {
                choice[pos] += 1;
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == edges.len() {
            break;
        }
        let g = ConvexGenerator::from_edges(edges.iter().zip(&choice).filter(|(_, &c)| c > 0).map(
            |(e, &c)| Edge {
                multiplicity: c,
                ..*e
            },
        ))
        .expect("sub-products of an all-e generator are valid");
        out.push(g);
    }
    out.sort_unstable_by(|a, b| {
        b.index()
            .cmp(&a.index())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    out
}

/// Independent re-check of a witness: the factor parts multiply back to
/// the target, every pair satisfies the relation, distinct pairs share no
/// elliptic orbit, all products are defined, and all pairwise product
/// indices agree — the products computed directly, not via the formula.
pub fn verify_witness(
    cfg: &CriterionConfig,
    witness: &[(ConvexGenerator, ConvexGenerator)],
) -> bool {
    let mut product_of_parts = ConvexGenerator::trivial();
    for (part, cand) in witness {
        product_of_parts = match product_of_parts.product(part) {
            Ok(p) => p,
            Err(_) => return false,
        };
        if !leq(&cfg.domain_from, &cfg.domain_to, cand, part).holds() {
            return false;
        }
    }
    if product_of_parts != cfg.target {
        return false;
    }
    for (i, (part_i, cand_i)) in witness.iter().enumerate() {
        for (part_j, cand_j) in witness.iter().skip(i + 1) {
            let identical = part_i == part_j && cand_i == cand_j;
            if !identical && cand_i.shares_elliptic_orbit(cand_j) {
                return false;
            }
            let (lhs, rhs) = match (cand_i.product(cand_j), part_i.product(part_j)) {
                (Ok(l), Ok(r)) => (l, r),
                _ => return false,
            };
            if lhs.index() != rhs.index() {
                return false;
            }
        }
    }
    true
}

/// Whether `g` is minimal for the domain: all edges `e` and the unique
/// action minimizer in its index.
///
/// Diagonal powers over a ball short-circuit: they are the ball's minimal
/// generators in every index they occupy (the acceptance sweep verifies
/// the dichotomy exhaustively through index 130), which keeps criterion
/// runs with large diagonal targets from re-enumerating a huge index
/// level.
pub fn is_minimal(dom: &ToricDomain, g: &ConvexGenerator) -> bool {
    if g.has_h_edges() {
        return false;
    }
    if dom.as_ball().is_some() && diagonal_power(g).is_some() {
        return true;
    }
    let index = g.index();
    debug_assert_eq!(index % 2, 0);
    let mins = minimal_generators(dom, index / 2);
    mins.len() == 1 && mins[0] == *g
}

/// `Some(d)` when `g = e_{1,1}^d`, `d ≥ 0`.
pub fn diagonal_power(g: &ConvexGenerator) -> Option<i64> {
    if g.is_trivial() {
        return Some(0);
    }
    let mut edges = g.edges();
    match (edges.next(), edges.next()) {
        (Some(e), None) if e.direction == (Direction { a: 1, b: 1 }) && e.label == EdgeLabel::E => {
            Some(e.multiplicity)
        }
        _ => None,
    }
}

/// Test oracle for the pairwise-to-subsets reduction: given two lists with
/// no hyperbolic orbit in common inside each list, equal member indices,
/// and equal pairwise product indices, check that every one of the `2^n`
/// subset products has equal index on both sides (computed directly).
pub fn subset_oracle(gs: &[ConvexGenerator], gs_prime: &[ConvexGenerator]) -> Result<bool> {
    if gs.len() != gs_prime.len() {
        return Err(EchError::HypothesisViolated(
            "lists differ in length".into(),
        ));
    }
    let n = gs.len();
    assert!(n <= 20, "subset oracle is exponential in the list length");
    for list in [gs, gs_prime] {
        for i in 0..n {
            for j in (i + 1)..n {
                if list[i].shares_hyperbolic_orbit(&list[j]) {
                    return Err(EchError::HypothesisViolated(
                        "a list shares a hyperbolic orbit internally".into(),
                    ));
                }
            }
        }
    }
    for i in 0..n {
        if gs[i].index() != gs_prime[i].index() {
            return Err(EchError::HypothesisViolated(
                ["member ", &i.to_string(), " indices differ"].concat(),
            ));
        }
        for j in (i + 1)..n {
            let lhs = gs[i].product(&gs[j]).expect("checked disjoint").index();
            let rhs = gs_prime[i]
                .product(&gs_prime[j])
                .expect("checked disjoint")
                .index();
            if lhs != rhs {
                return Err(EchError::HypothesisViolated(
                    [
                        "pairwise product indices differ at (",
                        &i.to_string(),
                        ",",
                        &j.to_string(),
                        ")",
                    ]
                    .concat(),
                ));
            }
        }
    }
    for mask in 0u32..(1 << n) {
        let mut lhs = ConvexGenerator::trivial();
        let mut rhs = ConvexGenerator::trivial();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                lhs = lhs.product(&gs[i]).expect("checked disjoint");
                rhs = rhs.product(&gs_prime[i]).expect("checked disjoint");
            }
        }
        if lhs.index() != rhs.index() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn gen(text: &str) -> ConvexGenerator {
        text.parse().unwrap()
    }

    fn dom(text: &str) -> ToricDomain {
        text.parse().unwrap()
    }

    #[test]
    fn leq_examples() {
        // e_{1,0}^2 <= e_{1,1} from P(2,1) into B(2): 4 = 4, 2 <= 2, 2 >= 2.
        let w = leq(
            &dom("P(2,1)"),
            &dom("B(2)"),
            &gen("e_{1,0}^2"),
            &gen("e_{1,1}"),
        );
        assert!(w.index_ok && w.action_ok && w.genus_ok && w.holds());
        // e_{1,0}^5 <= e_{1,1}^2 at c = 5/2.
        assert!(leq(
            &dom("P(2,1)"),
            &dom("B(5/2)"),
            &gen("e_{1,0}^5"),
            &gen("e_{1,1}^2")
        )
        .holds());
        // trivial on both sides: 0 >= -1.
        let triv = ConvexGenerator::trivial();
        assert!(leq(&dom("P(2,1)"), &dom("B(1)"), &triv, &triv).holds());
        // action failure flagged separately
        let w = leq(
            &dom("P(2,1)"),
            &dom("B(2)"),
            &gen("e_{1,1}"),
            &gen("e_{1,1}"),
        );
        assert!(w.index_ok && !w.action_ok);
    }

    #[test]
    fn candidate_set_for_unit_diagonal() {
        let got = candidates(&dom("P(2,1)"), &dom("B(2)"), &gen("e_{1,1}"));
        assert_eq!(got, alloc::vec![gen("e_{1,0}^2")]);
    }

    #[test]
    fn candidate_set_for_trivial_target() {
        let got = candidates(&dom("P(2,1)"), &dom("B(2)"), &ConvexGenerator::trivial());
        assert_eq!(got, alloc::vec![ConvexGenerator::trivial()]);
    }

    #[test]
    fn candidate_counts_at_the_obstruction_instance() {
        // N_d for (P(2,1), B(29/10)), frozen from exhaustive enumeration.
        let from = dom("P(2,1)");
        let to = dom("B(29/10)");
        let counts: Vec<usize> = (1..=4)
            .map(|d| candidates(&from, &to, &ConvexGenerator::e(1, 1, d)).len())
            .collect();
        assert_eq!(counts, alloc::vec![1, 1, 0, 0]);
        assert_eq!(
            candidates(&from, &to, &ConvexGenerator::e(1, 1, 2)),
            alloc::vec![gen("e_{1,0}^5")]
        );
    }

    #[test]
    fn candidates_all_satisfy_leq_and_none_missed() {
        let from = dom("P(2,1)");
        let to = dom("B(3)");
        for d in 1..=3 {
            let rhs = ConvexGenerator::e(1, 1, d);
            let got = candidates(&from, &to, &rhs);
            for c in &got {
                assert!(leq(&from, &to, c, &rhs).holds(), "{c}");
            }
            // brute force over a generous box with h labelings
            let cap = to.action(&rhs);
            let brute: Vec<ConvexGenerator> = crate::enumerate::enumerate(
                &crate::enumerate::EnumBounds::new(
                    crate::rational::floor_to_i64(&cap),
                    crate::rational::floor_to_i64(&(cap.clone() / rat(2, 1))),
                )
                .with_h(),
            )
            .into_iter()
            .filter(|g| leq(&from, &to, g, &rhs).holds())
            .collect();
            assert_eq!(got, brute, "d = {d}");
        }
    }

    #[test]
    fn obstruction_at_the_main_instance() {
        let mut cfg =
            CriterionConfig::new(dom("P(2,1)"), dom("B(29/10)"), ConvexGenerator::e(1, 1, 4));
        let report = run_criterion(&cfg).unwrap();
        assert_eq!(report.outcome, Outcome::Obstructed);
        assert!(report.witness.is_none());
        // the no-repeats pruning must not change the verdict
        cfg.no_repeats_pruning = true;
        assert_eq!(run_criterion(&cfg).unwrap().outcome, Outcome::Obstructed);
    }

    #[test]
    fn witness_found_at_the_folding_boundary() {
        // c = 3 = 2 + a/2: nothing to obstruct; small diagonal targets all
        // admit witnesses.
        for d in 1..=4 {
            let cfg = CriterionConfig::new(dom("P(2,1)"), dom("B(3)"), ConvexGenerator::e(1, 1, d));
            let report = run_criterion(&cfg).unwrap();
            assert_eq!(report.outcome, Outcome::WitnessFound, "d = {d}");
            let witness = report.witness.unwrap();
            assert!(verify_witness(&cfg, &witness));
        }
        // At d = 4 the largest-part-first order lands on the single-factor
        // witness e_{1,0}^3 e_{7,1}: index 28, action 12 = 3·4, x + y = 11.
        let cfg = CriterionConfig::new(dom("P(2,1)"), dom("B(3)"), ConvexGenerator::e(1, 1, 4));
        let witness = run_criterion(&cfg).unwrap().witness.unwrap();
        assert_eq!(
            witness,
            alloc::vec![(gen("e_{1,1}^4"), gen("e_{1,0}^3 e_{7,1}"))]
        );
        // The repeated identical pair (e_{1,1}^2, e_{4,1}) twice is also a
        // valid witness for the same target — repeats are exempt from the
        // elliptic-orbit condition — while a repeated pair whose
        // self-product index mismatches is not.
        let repeat = alloc::vec![
            (gen("e_{1,1}^2"), gen("e_{4,1}")),
            (gen("e_{1,1}^2"), gen("e_{4,1}")),
        ];
        assert!(verify_witness(&cfg, &repeat));
        assert_eq!(gen("e_{4,1}^2").index(), gen("e_{1,1}^4").index());
        let bad_repeat = alloc::vec![
            (gen("e_{1,1}^2"), gen("e_{1,0}^5")),
            (gen("e_{1,1}^2"), gen("e_{1,0}^5")),
        ];
        assert!(!verify_witness(&cfg, &bad_repeat));
    }

    #[test]
    fn search_uses_repeated_pairs_natively() {
        // From P(1,1) into B(2) with target e_{1,1}^2, the only satisfying
        // assignment is the identical pair (e_{1,1}, e_{1,1}) taken twice:
        // no single factor fits (any index-10 candidate needs action
        // x + y ≥ 5 > 2c) and all distinct index-4 pairs fail the pairwise
        // index equality.
        let cfg = CriterionConfig::new(dom("P(1,1)"), dom("B(2)"), ConvexGenerator::e(1, 1, 2));
        let report = run_criterion(&cfg).unwrap();
        assert_eq!(report.outcome, Outcome::WitnessFound);
        let witness = report.witness.unwrap();
        assert_eq!(
            witness,
            alloc::vec![
                (gen("e_{1,1}"), gen("e_{1,1}")),
                (gen("e_{1,1}"), gen("e_{1,1}")),
            ]
        );
        assert!(verify_witness(&cfg, &witness));
        // Misusing the no-repeats pruning outside its hypotheses (here
        // a < 2) discards that witness; the flag stays off by default.
        let mut pruned = cfg.clone();
        pruned.no_repeats_pruning = true;
        assert_eq!(run_criterion(&pruned).unwrap().outcome, Outcome::Obstructed);
        // A factor cap below the witness length likewise empties the capped
        // search; one above it does not interfere.
        let mut capped = cfg.clone();
        capped.max_parts = Some(1);
        assert_eq!(run_criterion(&capped).unwrap().outcome, Outcome::Obstructed);
        capped.max_parts = Some(2);
        assert_eq!(run_criterion(&capped).unwrap().outcome, Outcome::WitnessFound);
    }

    #[test]
    fn trivial_target_yields_empty_witness() {
        let cfg = CriterionConfig::new(dom("P(2,1)"), dom("B(1)"), ConvexGenerator::trivial());
        let report = run_criterion(&cfg).unwrap();
        assert_eq!(report.outcome, Outcome::WitnessFound);
        assert_eq!(report.witness, Some(alloc::vec![]));
    }

    #[test]
    fn non_minimal_target_is_rejected() {
        let cfg = CriterionConfig::new(dom("P(2,1)"), dom("B(1)"), gen("e_{2,1}"));
        assert!(matches!(
            run_criterion(&cfg),
            Err(EchError::TargetNotMinimal)
        ));
    }

    #[test]
    fn improved_criterion_flag_is_rejected() {
        let mut cfg = CriterionConfig::new(dom("P(2,1)"), dom("B(1)"), gen("e_{1,1}"));
        cfg.improved_criterion = true;
        assert!(matches!(run_criterion(&cfg), Err(EchError::Unsupported(_))));
    }

    #[test]
    fn minimality_checks() {
        assert!(is_minimal(&dom("B(1)"), &gen("e_{1,1}^3")));
        assert!(is_minimal(&dom("B(7/2)"), &gen("e_{1,1}")));
        assert!(!is_minimal(&dom("B(1)"), &gen("e_{2,1}")));
        assert!(!is_minimal(&dom("B(1)"), &gen("h_{1,1}")));
        assert!(is_minimal(&dom("P(2,1)"), &gen("e_{1,0}")));
    }

    #[test]
    fn subset_oracle_examples() {
        let a = gen("e_{1,0}^2");
        let b = gen("e_{1,1}");
        assert!(subset_oracle(core::slice::from_ref(&a), core::slice::from_ref(&b)).unwrap());
        // premise violation: indices differ
        assert!(matches!(
            subset_oracle(&[gen("e_{1,0}")], &[gen("e_{1,1}")]),
            Err(EchError::HypothesisViolated(_))
        ));
        // internal shared h
        assert!(matches!(
            subset_oracle(
                &[gen("h_{1,1}"), gen("h_{1,1} e_{1,0}")],
                &[gen("h_{1,1}"), gen("h_{1,1} e_{1,0}")]
            ),
            Err(EchError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn sub_generators_of_diagonal_power_are_partition_parts() {
        let subs = sub_generators(&ConvexGenerator::e(1, 1, 3));
        let names: Vec<String> = subs.iter().map(|g| g.to_string()).collect();
        assert_eq!(names, alloc::vec!["e_{1,1}^3", "e_{1,1}^2", "e_{1,1}"]);
    }
}
