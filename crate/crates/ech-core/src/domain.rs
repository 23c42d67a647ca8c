//! Convex toric domains and the symplectic action of a convex generator.
//!
//! A domain is the region under a nonincreasing concave piecewise-linear
//! function in the first quadrant. The action of a generator with respect
//! to a domain sums, over its edges, the maximal cross product of the edge
//! displacement with a point of the domain; for the built-in shapes this
//! collapses to closed forms (polydisk: `b·x + a·y`; ellipsoid and ball:
//! the level of the tangent line `b·x + a·y = c` at the path), which the
//! support-function form cross-checks.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{EchError, Result};
use crate::generator::ConvexGenerator;
use crate::rational::{parse_rational, rat_int, Rational};

/// A convex toric domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ToricDomain {
    /// Moment image `[0,a] × [0,b]`.
    Polydisk(Rational, Rational),
    /// Moment image the triangle with legs `a` (horizontal) and `b`
    /// (vertical).
    Ellipsoid(Rational, Rational),
    /// `B(c) = E(c,c)`.
    Ball(Rational),
    /// Region under the concave graph through the given vertices
    /// (first vertex on the y-axis, x strictly increasing, slopes strictly
    /// decreasing and nonpositive).
    ConvexPolygon(Vec<(Rational, Rational)>),
}

impl ToricDomain {
    pub fn polydisk(a: Rational, b: Rational) -> Result<Self> {
        require_positive("polydisk side a", &a)?;
        require_positive("polydisk side b", &b)?;
        Ok(ToricDomain::Polydisk(a, b))
    }

    pub fn ellipsoid(a: Rational, b: Rational) -> Result<Self> {
        require_positive("ellipsoid axis a", &a)?;
        require_positive("ellipsoid axis b", &b)?;
        Ok(ToricDomain::Ellipsoid(a, b))
    }

    pub fn ball(c: Rational) -> Result<Self> {
        require_positive("ball capacity c", &c)?;
        Ok(ToricDomain::Ball(c))
    }

    pub fn convex_polygon(vertices: Vec<(Rational, Rational)>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(EchError::ParamOutOfRange(
                "polygon needs at least two graph vertices".into(),
            ));
        }
        if !vertices[0].0.is_zero() {
            return Err(EchError::ParamOutOfRange(
                "polygon graph must start on the y-axis".into(),
            ));
        }
        if vertices[0].1 <= Rational::zero() {
            return Err(EchError::ParamOutOfRange(
                "polygon height at x = 0 must be positive".into(),
            ));
        }
        for (x, y) in &vertices {
            if *x < Rational::zero() || *y < Rational::zero() {
                return Err(EchError::ParamOutOfRange(
                    "polygon vertices must lie in the first quadrant".into(),
                ));
            }
        }
        let mut prev_slope: Option<Rational> = None;
        for w in vertices.windows(2) {
            let dx = &w[1].0 - &w[0].0;
            let dy = &w[1].1 - &w[0].1;
            if dx <= Rational::zero() {
                return Err(EchError::ParamOutOfRange(
                    "polygon vertex x-coordinates must strictly increase".into(),
                ));
            }
            let slope = dy / dx;
            if slope > Rational::zero() {
                return Err(EchError::ParamOutOfRange(
                    "polygon graph must be nonincreasing".into(),
                ));
            }
            if let Some(prev) = prev_slope {
                if slope >= prev {
                    return Err(EchError::ParamOutOfRange(
                        "consecutive polygon slopes must strictly decrease".into(),
                    ));
                }
            }
            prev_slope = Some(slope);
        }
        Ok(ToricDomain::ConvexPolygon(vertices))
    }

    /// Width of the moment image (largest x-coordinate).
    pub fn width(&self) -> Rational {
        match self {
            ToricDomain::Polydisk(a, _) | ToricDomain::Ellipsoid(a, _) => a.clone(),
            ToricDomain::Ball(c) => c.clone(),
            ToricDomain::ConvexPolygon(vs) => vs.last().expect("validated nonempty").0.clone(),
        }
    }

    /// Height of the moment image at `x = 0`.
    pub fn height(&self) -> Rational {
        match self {
            ToricDomain::Polydisk(_, b) | ToricDomain::Ellipsoid(_, b) => b.clone(),
            ToricDomain::Ball(c) => c.clone(),
            ToricDomain::ConvexPolygon(vs) => vs.first().expect("validated nonempty").1.clone(),
        }
    }

    /// `Some(c)` when the domain is a ball (possibly written `E(c,c)`).
    pub fn as_ball(&self) -> Option<Rational> {
        match self {
            ToricDomain::Ball(c) => Some(c.clone()),
            ToricDomain::Ellipsoid(a, b) if a == b => Some(a.clone()),
            _ => None,
        }
    }

    /// Supremum of `b_dir·p_x + a_dir·p_y` over the domain, for an edge
    /// direction `(a_dir, b_dir)`. Attained at a vertex of the upper
    /// boundary because both coefficients are nonnegative.
    pub fn support(&self, a_dir: i64, b_dir: i64) -> Rational {
        let (a_dir, b_dir) = (rat_int(a_dir), rat_int(b_dir));
        match self {
            ToricDomain::Polydisk(a, b) => &b_dir * a + &a_dir * b,
            ToricDomain::Ellipsoid(a, b) => {
                let at_width = &b_dir * a;
                let at_height = &a_dir * b;
                at_width.max(at_height)
            }
            ToricDomain::Ball(c) => {
                let at_width = &b_dir * c;
                let at_height = &a_dir * c;
                at_width.max(at_height)
            }
            ToricDomain::ConvexPolygon(vs) => vs
                .iter()
                .map(|(px, py)| &b_dir * px + &a_dir * py)
                .max()
                .expect("validated nonempty"),
        }
    }

    /// Symplectic action of a generator with respect to this domain.
    ///
    /// Closed forms are used for the standard shapes; the general polygon
    /// case sums the per-edge support values, and the two routes agree (see
    /// tests).
    pub fn action(&self, g: &ConvexGenerator) -> Rational {
        match self {
            ToricDomain::Polydisk(a, b) => b * rat_int(g.x()) + a * rat_int(g.y()),
            ToricDomain::Ellipsoid(a, b) => tangency_level(a, b, g),
            ToricDomain::Ball(c) => tangency_level(c, c, g),
            ToricDomain::ConvexPolygon(_) => self.action_support_form(g),
        }
    }

    /// Per-edge support-function form of the action; equal to `action` for
    /// every variant and every generator.
    pub fn action_support_form(&self, g: &ConvexGenerator) -> Rational {
        let mut total = Rational::zero();
        for edge in g.edges() {
            total += rat_int(edge.multiplicity) * self.support(edge.direction.a, edge.direction.b);
        }
        total
    }
}

/// Level `c` of the line `b·x + a·y = c` tangent to the path from above:
/// the maximum of the functional over the path vertices.
fn tangency_level(a: &Rational, b: &Rational, g: &ConvexGenerator) -> Rational {
    g.path_vertices()
        .into_iter()
        .map(|(px, py)| b * rat_int(px) + a * rat_int(py))
        .max()
        .expect("path has at least one vertex")
}

/// Exact comparison of a rational `a` against `(5+√7)/3`, the threshold of
/// the polydisk-into-ball obstruction range (equivalently written
/// `(√7-1)/(√7-2) = 2.54858...`). Uses only integer arithmetic:
/// `a < (5+√7)/3  ⇔  3a-5 < 0  or  (3a-5)² < 7`.
pub fn compare_a_to_sqrt7_threshold(a: &Rational) -> Ordering {
    let t = rat_int(3) * a - rat_int(5);
    if t < Rational::zero() {
        return Ordering::Less;
    }
    (&t * &t).cmp(&rat_int(7))
}

fn require_positive(what: &str, value: &Rational) -> Result<()> {
    if *value <= Rational::zero() {
        return Err(EchError::ParamOutOfRange(
            [what, " must be positive, got ", &value.to_string()].concat(),
        ));
    }
    Ok(())
}

impl fmt::Display for ToricDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToricDomain::Polydisk(a, b) => write!(f, "P({a},{b})"),
            ToricDomain::Ellipsoid(a, b) => write!(f, "E({a},{b})"),
            ToricDomain::Ball(c) => write!(f, "B({c})"),
            ToricDomain::ConvexPolygon(vs) => {
                write!(f, "poly[")?;
                for (i, (x, y)) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "({x},{y})")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl FromStr for ToricDomain {
    type Err = EchError;

    /// Parse `P(a,b)`, `E(a,b)`, `B(c)`, or `poly[(x1,y1),(x2,y2),...]`
    /// with rationals written `p/q` or as integers.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("poly[").and_then(|r| r.strip_suffix(']')) {
            let mut vertices = Vec::new();
            for part in split_top_level_pairs(rest)? {
                let (x, y) = part;
                vertices.push((parse_rational(x)?, parse_rational(y)?));
            }
            return ToricDomain::convex_polygon(vertices);
        }
        let (head, args) = t
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|args| (h.trim(), args)))
            .ok_or_else(|| bad_domain(t))?;
        let parts: Vec<&str> = args.split(',').collect();
        match (head, parts.as_slice()) {
            ("P", [a, b]) => ToricDomain::polydisk(parse_rational(a)?, parse_rational(b)?),
            ("E", [a, b]) => ToricDomain::ellipsoid(parse_rational(a)?, parse_rational(b)?),
            ("B", [c]) => ToricDomain::ball(parse_rational(c)?),
            _ => Err(bad_domain(t)),
        }
    }
}

fn bad_domain(text: &str) -> EchError {
    EchError::Parse(
        ["`", text, "` is not a domain literal; expected P(a,b), E(a,b), B(c), or poly[(x1,y1),...] with rationals as p/q"]
            .concat(),
    )
}

/// Split `"(x1,y1),(x2,y2)"` into coordinate string pairs.
fn split_top_level_pairs(text: &str) -> Result<Vec<(&str, &str)>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest.trim_start_matches(',').trim();
        let inner = rest.strip_prefix('(').ok_or_else(|| {
            EchError::Parse(["expected `(` in polygon vertex list near `", rest, "`"].concat())
        })?;
        let (pair, tail) = inner
            .split_once(')')
            .ok_or_else(|| EchError::Parse("unterminated polygon vertex".into()))?;
        let (x, y) = pair.split_once(',').ok_or_else(|| {
            EchError::Parse(["vertex `", pair, "` needs two coordinates"].concat())
        })?;
        out.push((x, y));
        rest = tail.trim();
    }
    if out.is_empty() {
        return Err(EchError::Parse("polygon vertex list is empty".into()));
    }
    Ok(out)
}

/// Convenience: `BigInt` sum of a path vertex pair, used by ball actions in
/// a few hot paths.
pub fn max_vertex_coordinate_sum(g: &ConvexGenerator) -> i64 {
    g.path_vertices()
        .into_iter()
        .map(|(px, py)| px + py)
        .max()
        .unwrap_or(0)
}

#[allow(unused)]
fn bigint(v: i64) -> BigInt {
    BigInt::from(v)
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
    fn polydisk_action_closed_form() {
        let p = dom("P(2,1)");
        let g = gen("e_{1,0}^3 e_{2,1} e_{1,3}");
        assert_eq!(p.action(&g), rat_int(g.x()) + rat(2, 1) * rat_int(g.y()));
        assert_eq!(p.action(&ConvexGenerator::trivial()), rat_int(0));
    }

    #[test]
    fn ball_action_on_diagonal_powers() {
        for d in 1..=6 {
            let g = ConvexGenerator::e(1, 1, d);
            assert_eq!(dom("B(5/2)").action(&g), rat(5, 2) * rat_int(d));
        }
    }

    #[test]
    fn ball_action_is_max_vertex_sum() {
        let c = rat(7, 3);
        let ball = ToricDomain::ball(c.clone()).unwrap();
        for text in [
            "e_{1,0}^2 e_{1,1}",
            "e_{2,1} e_{1,3}",
            "e_{1,0}^4",
            "1",
            "e_{0,1}^3",
        ] {
            let g = gen(text);
            let expected = c.clone() * rat_int(max_vertex_coordinate_sum(&g));
            assert_eq!(ball.action(&g), expected, "{text}");
        }
    }

    #[test]
    fn ball_equals_square_ellipsoid() {
        let b = dom("B(3/2)");
        let e = dom("E(3/2,3/2)");
        for text in ["e_{1,1}^3", "e_{1,0}^2 e_{3,1}", "h_{2,1} e_{0,1}"] {
            let g = gen(text);
            assert_eq!(b.action(&g), e.action(&g), "{text}");
        }
        assert_eq!(b.as_ball(), e.as_ball());
    }

    #[test]
    fn polygon_rectangle_matches_polydisk() {
        let rect = dom("poly[(0,1),(2,1)]");
        let p = dom("P(2,1)");
        for text in [
            "e_{1,1}^2",
            "e_{1,0}^3 e_{2,1} e_{1,3}",
            "e_{0,1}^4",
            "h_{1,2}",
            "1",
        ] {
            let g = gen(text);
            assert_eq!(rect.action(&g), p.action(&g), "{text}");
        }
    }

    #[test]
    fn polygon_triangle_matches_ellipsoid() {
        let tri = dom("poly[(0,1),(2,0)]");
        let e = dom("E(2,1)");
        for text in [
            "e_{1,1}^2",
            "e_{1,0}^3 e_{2,1} e_{1,3}",
            "e_{0,1}^4",
            "e_{2,1}",
        ] {
            let g = gen(text);
            assert_eq!(tri.action(&g), e.action(&g), "{text}");
        }
    }

    #[test]
    fn support_form_agrees_with_tangency_form() {
        // In particular for an edge parallel to a face of the domain the
        // support value is constant along that face.
        let e = dom("E(2,1)");
        assert_eq!(e.support(2, 1), rat_int(2)); // attained at (0,1) and (2,0)
        for text in [
            "e_{2,1}",
            "e_{2,1}^3",
            "e_{1,0} e_{2,1} e_{0,1}",
            "e_{1,1}^4",
            "e_{1,3}",
        ] {
            let g = gen(text);
            assert_eq!(e.action(&g), e.action_support_form(&g), "{text}");
        }
    }

    #[test]
    fn ball_action_scales_linearly() {
        let g = gen("e_{1,0}^2 e_{1,1}");
        let base = dom("B(3/4)").action(&g);
        assert_eq!(dom("B(3/2)").action(&g), rat_int(2) * base.clone());
        assert_eq!(dom("B(9/4)").action(&g), rat_int(3) * base);
    }

    #[test]
    fn action_monotone_under_adding_edges() {
        let domains = [
            dom("P(2,1)"),
            dom("B(1)"),
            dom("E(3,2)"),
            dom("poly[(0,2),(1,2),(3,1)]"),
        ];
        let g = gen("e_{2,1} e_{1,3}");
        let bigger = gen("e_{1,0} e_{2,1} e_{1,3} e_{0,1}");
        for d in &domains {
            assert!(d.action(&g) <= d.action(&bigger), "{d}");
        }
    }

    #[test]
    fn threshold_comparisons_are_exact() {
        assert_eq!(compare_a_to_sqrt7_threshold(&rat_int(2)), Ordering::Less);
        assert_eq!(compare_a_to_sqrt7_threshold(&rat(5, 2)), Ordering::Less);
        assert_eq!(compare_a_to_sqrt7_threshold(&rat(13, 5)), Ordering::Greater);
        assert_eq!(compare_a_to_sqrt7_threshold(&rat_int(3)), Ordering::Greater);
        // (3a-5)^2 vs 7 at the spec's probe points
        assert_eq!(
            compare_a_to_sqrt7_threshold(&rat(2548, 1000)),
            Ordering::Less
        );
        assert_eq!(
            compare_a_to_sqrt7_threshold(&rat(2549, 1000)),
            Ordering::Greater
        );
    }

    #[test]
    fn domain_literals_round_trip() {
        for text in ["P(2,1)", "B(29/10)", "E(3,5/2)", "poly[(0,1),(2,1)]"] {
            let d = dom(text);
            assert_eq!(d.to_string(), text);
            assert_eq!(dom(&d.to_string()), d);
        }
    }

    #[test]
    fn domain_parser_rejects_floats_and_garbage() {
        assert!("B(2.9)".parse::<ToricDomain>().is_err());
        assert!("Q(1,2)".parse::<ToricDomain>().is_err());
        assert!("P(2)".parse::<ToricDomain>().is_err());
        assert!("P(0,1)".parse::<ToricDomain>().is_err());
        assert!("poly[(1,1),(2,1)]".parse::<ToricDomain>().is_err()); // must start on y-axis
        assert!("poly[(0,1),(1,1),(2,1)]".parse::<ToricDomain>().is_err()); // slopes must strictly decrease
    }
}
