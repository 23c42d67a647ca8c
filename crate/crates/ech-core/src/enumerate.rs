//! Exhaustive enumeration of convex generators under box, index, and action
//! bounds.
//!
//! The walk descends over edge directions in drawing order (decreasing
//! slope), so every node of the search tree is itself a valid generator.
//! Both filters prune: adding any edge raises the index by at least 2 and
//! never lowers the action, so subtrees past a target index or an action
//! cap are dead.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::domain::ToricDomain;
use crate::generator::{ConvexGenerator, Direction, Edge, EdgeLabel};
use crate::rational::{rat_int, Rational};

/// Bounds for an enumeration run. `max_x`/`max_y` keep the walk finite; the
/// optional filters restrict what is yielded (and prune the walk).
#[derive(Clone, Debug)]
pub struct EnumBounds {
    pub max_x: i64,
    pub max_y: i64,
    pub target_index: Option<i64>,
    pub max_action: Option<(ToricDomain, Rational)>,
    pub allow_h: bool,
}

impl EnumBounds {
    pub fn new(max_x: i64, max_y: i64) -> Self {
        assert!(max_x >= 0 && max_y >= 0, "box bounds must be nonnegative");
        EnumBounds {
            max_x,
            max_y,
            target_index: None,
            max_action: None,
            allow_h: false,
        }
    }

    pub fn with_target_index(mut self, index: i64) -> Self {
        self.target_index = Some(index);
        self
    }

    pub fn with_max_action(mut self, domain: ToricDomain, cap: Rational) -> Self {
        self.max_action = Some((domain, cap));
        self
    }

    pub fn with_h(mut self) -> Self {
        self.allow_h = true;
        self
    }
}

/// All coprime directions whose primitive step fits the box, in drawing
/// order (horizontal first, vertical last).
pub fn directions_in_box(max_x: i64, max_y: i64) -> Vec<Direction> {
    let mut dirs = Vec::new();
    if max_x >= 1 {
        dirs.push(Direction { a: 1, b: 0 });
    }
    for a in 1..=max_x {
        for b in 1..=max_y {
            if a.gcd(&b) == 1 {
                dirs.push(Direction { a, b });
            }
        }
    }
    if max_y >= 1 {
        dirs.push(Direction { a: 0, b: 1 });
    }
    dirs.sort_unstable();
    dirs
}

/// Every valid generator in the box passing the filters, exactly once, in
/// lexicographic order of the printed formal product.
pub fn enumerate(bounds: &EnumBounds) -> Vec<ConvexGenerator> {
    let mut out = Vec::new();
    walk(bounds, |g| out.push((g.to_string(), g.clone())));
    out.sort_unstable_by(|(a, _), (b, _)| a.cmp(b));
    out.into_iter().map(|(_, g)| g).collect()
}

/// Incremental state of a partial generator along the walk. Area is tracked
/// through `skew = 2·x·y - 2A`, which grows by `ν_x·(2·y_before + ν_y)` per
/// appended edge.
#[derive(Clone, Copy)]
struct Partial {
    x: i64,
    y: i64,
    m: i64,
    h: i64,
    skew: i64,
}

impl Partial {
    const ROOT: Partial = Partial {
        x: 0,
        y: 0,
        m: 0,
        h: 0,
        skew: 0,
    };

    fn append(self, dir: Direction, mult: i64, with_h: bool) -> Partial {
        let (dx, dy) = (mult * dir.a, mult * dir.b);
        Partial {
            x: self.x + dx,
            y: self.y + dy,
            m: self.m + mult,
            h: self.h + i64::from(with_h),
            skew: self.skew + dx * (2 * self.y + dy),
        }
    }

    fn doubled_area(self) -> i64 {
        2 * self.x * self.y - self.skew
    }

    fn index(self) -> i64 {
        self.doubled_area() + self.x + self.y + self.m - self.h
    }
}

/// Drive `visit` over every generator in the box passing the filters.
pub fn walk<F: FnMut(&ConvexGenerator)>(bounds: &EnumBounds, mut visit: F) {
    let dirs = directions_in_box(bounds.max_x, bounds.max_y);
    let supports: Vec<Rational> = match &bounds.max_action {
        Some((dom, _)) => dirs.iter().map(|d| dom.support(d.a, d.b)).collect(),
        None => Vec::new(),
    };
    let cap = bounds.max_action.as_ref().map(|(_, cap)| cap.clone());
    let mut stack: Vec<Edge> = Vec::new();
    let mut ctx = WalkCtx {
        bounds,
        dirs: &dirs,
        supports: &supports,
        cap: cap.as_ref(),
        visit: &mut visit,
    };
    descend(&mut ctx, 0, Partial::ROOT, rat_int(0), &mut stack);
}

struct WalkCtx<'a, F> {
    bounds: &'a EnumBounds,
    dirs: &'a [Direction],
    supports: &'a [Rational],
    cap: Option<&'a Rational>,
    visit: &'a mut F,
}

fn descend<F: FnMut(&ConvexGenerator)>(
    ctx: &mut WalkCtx<'_, F>,
    from: usize,
    partial: Partial,
    action: Rational,
    stack: &mut Vec<Edge>,
) {
    let emit = match ctx.bounds.target_index {
        Some(t) => partial.index() == t,
        None => true,
    };
    if emit {
        let g = ConvexGenerator::from_edges(stack.iter().copied()).expect("walk avoids clashes");
        (ctx.visit)(&g);
    }
    if ctx
        .bounds
        .target_index
        .is_some_and(|t| partial.index() >= t)
    {
        return; // every extension only increases the index
    }
    for (offset, &dir) in ctx.dirs[from..].iter().enumerate() {
        let i = from + offset;
        if partial.x + dir.a > ctx.bounds.max_x || partial.y + dir.b > ctx.bounds.max_y {
            continue;
        }
        let mut mult = 1;
        loop {
            if partial.x + mult * dir.a > ctx.bounds.max_x
                || partial.y + mult * dir.b > ctx.bounds.max_y
            {
                break;
            }
            let next_action = match ctx.cap {
                Some(cap) => {
                    let a = action.clone() + rat_int(mult) * ctx.supports[i].clone();
                    if a > *cap {
                        break; // action grows with multiplicity
                    }
                    a
                }
                None => action.clone(),
            };
            let labels: &[bool] = if ctx.bounds.allow_h && !dir.is_axis() {
                &[false, true]
            } else {
                &[false]
            };
            for &with_h in labels {
                let next = partial.append(dir, mult, with_h);
                if ctx.bounds.target_index.is_some_and(|t| next.index() > t) {
                    continue;
                }
                let label = if with_h { EdgeLabel::H } else { EdgeLabel::E };
                stack.push(Edge {
                    direction: dir,
                    multiplicity: mult,
                    label,
                });
                descend(ctx, i + 1, next, next_action.clone(), stack);
                stack.pop();
            }
            mult += 1;
        }
    }
}
