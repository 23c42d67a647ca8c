//! Convex generators: convex integral lattice paths with labelled edges.
//!
//! A convex generator runs from `(0, y)` on the y-axis to `(x, 0)` on the
//! x-axis, drawn as a sequence of edges of strictly decreasing slope. It is
//! equivalently a commutative formal product of symbols `e_{a,b}` and
//! `h_{a,b}` with coprime nonnegative direction `(a, b)`: the factor
//! `e_{a,b}^m` contributes an edge with displacement `(m·a, -m·b)`, and at
//! most one `h` factor may appear per direction (stored here as a
//! multiplicity together with an `h` flag, so `e_{a,b}^{m-1} h_{a,b}` is one
//! edge of multiplicity `m`). Horizontal and vertical edges only carry `e`.
//!
//! The storage is a map keyed by direction, ordered by slope in drawing
//! order, which makes formal-product equality structural equality and path
//! traversal a plain iteration.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

use crate::error::{EchError, Result};

/// Coprime nonnegative edge direction `(a, b)`; the drawn displacement is
/// `(m·a, -m·b)`.
///
/// Ordered by drawing position: horizontal `(1,0)` first, then strictly
/// decreasing slope `-b/a`, vertical `(0,1)` last. Slopes of distinct
/// coprime directions never tie, so this is a total order compatible with
/// equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    pub a: i64,
    pub b: i64,
}

impl Direction {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 0 || b < 0 || (a == 0 && b == 0) {
            return Err(EchError::InvalidEdge(
                [
                    "direction (",
                    &a.to_string(),
                    ",",
                    &b.to_string(),
                    ") must be nonnegative and nonzero",
                ]
                .concat(),
            ));
        }
        if a.gcd(&b) != 1 {
            return Err(EchError::InvalidEdge(
                [
                    "direction (",
                    &a.to_string(),
                    ",",
                    &b.to_string(),
                    ") is not coprime",
                ]
                .concat(),
            ));
        }
        Ok(Direction { a, b })
    }

    pub fn is_axis(&self) -> bool {
        self.a == 0 || self.b == 0
    }

    /// Mirror image across the diagonal `y = x`.
    pub fn reflected(&self) -> Direction {
        Direction {
            a: self.b,
            b: self.a,
        }
    }
}

/// Compare slopes `-b/a` of two directions (vertical counts as `-∞`,
/// horizontal as `0`), by cross-multiplication.
pub fn cmp_slope(p: Direction, q: Direction) -> Ordering {
    // mu(p) < mu(q)  <=>  p.b * q.a > q.b * p.a
    (q.b * p.a).cmp(&(p.b * q.a))
}

impl Ord for Direction {
    fn cmp(&self, other: &Self) -> Ordering {
        // Drawing order: larger slope first.
        cmp_slope(*other, *self)
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Edge label: elliptic (`e`) or hyperbolic (`h`) orbit symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    E,
    H,
}

/// One edge of a convex generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub direction: Direction,
    pub multiplicity: i64,
    pub label: EdgeLabel,
}

impl Edge {
    pub fn new(a: i64, b: i64, multiplicity: i64, label: EdgeLabel) -> Result<Self> {
        let direction = Direction::new(a, b)?;
        if multiplicity < 1 {
            return Err(EchError::InvalidEdge(
                "multiplicity must be positive".into(),
            ));
        }
        if label == EdgeLabel::H && direction.is_axis() {
            return Err(EchError::InvalidEdge(
                "horizontal and vertical edges can only be labelled e".into(),
            ));
        }
        Ok(Edge {
            direction,
            multiplicity,
            label,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeEntry {
    multiplicity: i64,
    has_h: bool,
}

/// A convex generator: a formal product of labelled edges, at most one
/// factor per direction and at most one `h` per direction. The empty
/// product is the trivial generator `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConvexGenerator {
    edges: BTreeMap<Direction, EdgeEntry>,
}

/// Combinatorial quantities of a generator. Written `x, y, m, h, L, b, 2A,
/// I` in the usual notation; areas are stored doubled so everything stays
/// an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorStats {
    /// x-coordinate of the endpoint on the x-axis.
    pub x: i64,
    /// y-coordinate of the endpoint on the y-axis.
    pub y: i64,
    /// Total multiplicity of all edges.
    pub m: i64,
    /// Number of edges labelled `h`.
    pub h: i64,
    /// Lattice points interior to and on the boundary of the region bounded
    /// by the path and the axes.
    pub lattice_points: i64,
    /// `b = x + y + m`; equals the boundary lattice-point count whenever the
    /// path does not lie on one axis.
    pub b: i64,
    /// Twice the area of the bounded region.
    pub doubled_area: i64,
    /// ECH index `I = 2(L - 1) - h = 2A + b - h`.
    pub index: i64,
}

/// Lattice-point census of the bounded region, by direct scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCount {
    pub interior: i64,
    pub boundary: i64,
    pub total: i64,
}

impl ConvexGenerator {
    /// The trivial generator `1` (empty product).
    pub fn trivial() -> Self {
        ConvexGenerator {
            edges: BTreeMap::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    /// Single-edge generator.
    pub fn from_edge(edge: Edge) -> Self {
        let mut g = ConvexGenerator::trivial();
        g.push_edge(edge).expect("single edge cannot clash");
        g
    }

    /// Build from edges, merging factors with equal direction.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Result<Self> {
        let mut g = ConvexGenerator::trivial();
        for e in edges {
            g.push_edge(e)?;
        }
        Ok(g)
    }

    /// Shorthand used throughout the tests: `e(a, b, m)`.
    pub fn e(a: i64, b: i64, multiplicity: i64) -> Self {
        Self::from_edge(Edge::new(a, b, multiplicity, EdgeLabel::E).expect("valid e edge"))
    }

    /// Shorthand: `h(a, b)` (multiplicity-one hyperbolic edge).
    pub fn h(a: i64, b: i64) -> Self {
        Self::from_edge(Edge::new(a, b, 1, EdgeLabel::H).expect("valid h edge"))
    }

    /// Multiply a factor in, adding multiplicities; fails if both carry `h`
    /// on the same direction.
    pub fn push_edge(&mut self, edge: Edge) -> Result<()> {
        let entry = self.edges.entry(edge.direction).or_insert(EdgeEntry {
            multiplicity: 0,
            has_h: false,
        });
        if edge.label == EdgeLabel::H {
            if entry.has_h {
                return Err(EchError::SharedHyperbolicOrbit(edge.direction));
            }
            entry.has_h = true;
        }
        entry.multiplicity += edge.multiplicity;
        Ok(())
    }

    /// Edges in drawing order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(dir, entry)| Edge {
            direction: *dir,
            multiplicity: entry.multiplicity,
            label: if entry.has_h {
                EdgeLabel::H
            } else {
                EdgeLabel::E
            },
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn x(&self) -> i64 {
        self.edges.iter().map(|(d, e)| e.multiplicity * d.a).sum()
    }

    pub fn y(&self) -> i64 {
        self.edges.iter().map(|(d, e)| e.multiplicity * d.b).sum()
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.edges.values().map(|e| e.multiplicity).sum()
    }

    pub fn h_count(&self) -> i64 {
        self.edges.values().filter(|e| e.has_h).count() as i64
    }

    pub fn has_h_edges(&self) -> bool {
        self.edges.values().any(|e| e.has_h)
    }

    /// Directions carrying an elliptic factor (`e_{a,b}` appears in the
    /// formal product): multiplicity at least 2, or multiplicity 1 without
    /// an `h` label.
    pub fn elliptic_directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.edges
            .iter()
            .filter(|(_, e)| e.multiplicity >= 2 || !e.has_h)
            .map(|(d, _)| *d)
    }

    /// Directions carrying the `h` factor.
    pub fn hyperbolic_directions(&self) -> impl Iterator<Item = Direction> + '_ {
        self.edges.iter().filter(|(_, e)| e.has_h).map(|(d, _)| *d)
    }

    pub fn shares_elliptic_orbit(&self, other: &Self) -> bool {
        self.elliptic_directions().any(|d| {
            other
                .edges
                .get(&d)
                .is_some_and(|e| e.multiplicity >= 2 || !e.has_h)
        })
    }

    pub fn shares_hyperbolic_orbit(&self, other: &Self) -> bool {
        self.hyperbolic_directions()
            .any(|d| other.edges.get(&d).is_some_and(|e| e.has_h))
    }

    /// Vertices of the drawn path, from `(0, y)` to `(x, 0)`. The trivial
    /// generator yields the single point `(0, 0)`.
    pub fn path_vertices(&self) -> Vec<(i64, i64)> {
        let mut vertices = Vec::with_capacity(self.edges.len() + 1);
        let (mut cx, mut cy) = (0, self.y());
        vertices.push((cx, cy));
        for (dir, entry) in &self.edges {
            cx += entry.multiplicity * dir.a;
            cy -= entry.multiplicity * dir.b;
            vertices.push((cx, cy));
        }
        vertices
    }

    /// Twice the area of the region bounded by the path and the axes.
    pub fn doubled_area(&self) -> i64 {
        let mut area2 = 0;
        let (mut cx, mut cy) = (0, self.y());
        for (dir, entry) in &self.edges {
            let dx = entry.multiplicity * dir.a;
            let dy = entry.multiplicity * dir.b;
            area2 += dx * (2 * cy - dy);
            cx += dx;
            cy -= dy;
        }
        debug_assert_eq!((cx, cy), (self.x(), 0));
        area2
    }

    /// All combinatorial quantities at once.
    ///
    /// `L` is derived from the doubled area when the path bounds a
    /// two-dimensional region and by direct segment count (`m + 1`) when
    /// the path lies on one axis.
    pub fn stats(&self) -> GeneratorStats {
        let x = self.x();
        let y = self.y();
        let m = self.total_multiplicity();
        let h = self.h_count();
        let doubled_area = self.doubled_area();
        let b = x + y + m;
        let index = doubled_area + b - h;
        let lattice_points = if x == 0 || y == 0 {
            m + 1
        } else {
            debug_assert_eq!((doubled_area + b) % 2, 0);
            (doubled_area + b) / 2 + 1
        };
        GeneratorStats {
            x,
            y,
            m,
            h,
            lattice_points,
            b,
            doubled_area,
            index,
        }
    }

    /// ECH index `I`.
    pub fn index(&self) -> i64 {
        self.stats().index
    }

    /// Count lattice points of the bounded region by scanning the bounding
    /// box; the independent route to `L` and hence to the index.
    pub fn lattice_count(&self) -> LatticeCount {
        let x = self.x();
        let vertices = self.path_vertices();
        let mut interior = 0;
        let mut boundary = 0;
        for u in 0..=x {
            let roof = self.column_roof(u, &vertices);
            for v in 0..=roof {
                if u == 0 || v == 0 || on_path(&vertices, u, v) {
                    boundary += 1;
                } else {
                    interior += 1;
                }
            }
        }
        LatticeCount {
            interior,
            boundary,
            total: interior + boundary,
        }
    }

    /// Largest integer `v` with `(u, v)` weakly under the path.
    fn column_roof(&self, u: i64, vertices: &[(i64, i64)]) -> i64 {
        if self.x() == 0 {
            return self.y();
        }
        for w in vertices.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x0 == x1 {
                continue; // vertical drop; the roof there is y0, already seen
            }
            if u >= x0 && u <= x1 {
                // height = y0 + (u - x0) * (y1 - y0) / (x1 - x0), floored
                let num = y0 * (x1 - x0) + (u - x0) * (y1 - y0);
                return num.div_euclid(x1 - x0);
            }
        }
        unreachable!("column {u} not covered by path");
    }

    /// Formal product: merge edge maps; defined when no `h` factor repeats.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for edge in other.edges() {
            out.push_edge(edge)?;
        }
        Ok(out)
    }

    /// `n`-fold product; `n = 0` gives the trivial generator.
    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = ConvexGenerator::trivial();
        for _ in 0..n {
            out = out.product(self)?;
        }
        Ok(out)
    }

    /// Mirror image across `y = x`.
    pub fn reflect(&self) -> Self {
        let mut out = ConvexGenerator::trivial();
        for edge in self.edges() {
            out.push_edge(Edge {
                direction: edge.direction.reflected(),
                ..edge
            })
            .expect("reflection preserves validity");
        }
        out
    }
}

fn on_path(vertices: &[(i64, i64)], u: i64, v: i64) -> bool {
    if vertices.len() == 1 {
        return (u, v) == vertices[0];
    }
    vertices.windows(2).any(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        let within = u >= x0.min(x1) && u <= x0.max(x1) && v >= y0.min(y1) && v <= y0.max(y1);
        within && (u - x0) * (y1 - y0) == (v - y0) * (x1 - x0)
    })
}

/// Index of a product of two generators without forming the product:
/// `I(Λ·Γ) = I(Λ) + I(Γ) + 2R`, where `R` sums, for every edge of one
/// factor, a rectangle of width `ν_x` and height `σ_y` for each at least as
/// steep edge `σ` of the other factor (strictly steeper in the second sum,
/// so parallel edges are counted exactly once).
pub fn product_index_formula(g1: &ConvexGenerator, g2: &ConvexGenerator) -> Result<i64> {
    if let Some(dir) = g1
        .hyperbolic_directions()
        .find(|d| g2.edges.get(d).is_some_and(|e| e.has_h))
    {
        return Err(EchError::SharedHyperbolicOrbit(dir));
    }
    Ok(g1.index() + g2.index() + 2 * rectangle_sum(g1, g2))
}

/// The rectangle sum `R` of the product-index formula.
pub fn rectangle_sum(g1: &ConvexGenerator, g2: &ConvexGenerator) -> i64 {
    let mut r = 0;
    for nu in g1.edges() {
        for sigma in g2.edges() {
            // sigma at least as steep as nu
            if cmp_slope(sigma.direction, nu.direction) != Ordering::Greater {
                r += nu.multiplicity * nu.direction.a * sigma.multiplicity * sigma.direction.b;
            }
        }
    }
    for nu in g2.edges() {
        for sigma in g1.edges() {
            // sigma strictly steeper than nu
            if cmp_slope(sigma.direction, nu.direction) == Ordering::Less {
                r += nu.multiplicity * nu.direction.a * sigma.multiplicity * sigma.direction.b;
            }
        }
    }
    r
}

/// Doubled area of `g·g` for `h`-free `g`, checking the dilation identity
/// `A(Λ·Λ) = 4A(Λ)` along the way.
pub fn self_product_doubled_area(g: &ConvexGenerator) -> Result<i64> {
    let square = g.product(g)?;
    let doubled = square.doubled_area();
    assert_eq!(
        doubled,
        4 * g.doubled_area(),
        "dilation by 2 must quadruple area"
    );
    Ok(doubled)
}

impl fmt::Display for ConvexGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut factor = |f: &mut fmt::Formatter<'_>, sym: char, d: Direction, m: i64| {
            if m == 0 {
                return Ok(());
            }
            if !core::mem::take(&mut first) {
                write!(f, " ")?;
            }
            write!(f, "{sym}_{{{},{}}}", d.a, d.b)?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
            Ok(())
        };
        for (dir, entry) in &self.edges {
            if entry.has_h {
                factor(f, 'e', *dir, entry.multiplicity - 1)?;
                factor(f, 'h', *dir, 1)?;
            } else {
                factor(f, 'e', *dir, entry.multiplicity)?;
            }
        }
        Ok(())
    }
}

impl FromStr for ConvexGenerator {
    type Err = EchError;

    /// Parse a formal product: factors `(e|h)_{a,b}` with an optional
    /// exponent `^m` or `^{m}`, separated by whitespace or `*` (separators
    /// optional). The bare string `1` is the trivial generator.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        if compact == "1" {
            return Ok(ConvexGenerator::trivial());
        }
        if compact.is_empty() {
            return Err(EchError::Parse(
                "empty formal product (write `1` for the trivial generator)".into(),
            ));
        }
        let bytes = compact.as_bytes();
        let mut pos = 0;
        let mut out = ConvexGenerator::trivial();
        while pos < bytes.len() {
            let label = match bytes[pos] {
                b'e' => EdgeLabel::E,
                b'h' => EdgeLabel::H,
                other => {
                    return Err(EchError::Parse(
                        [
                            "expected factor `e` or `h`, found `",
                            &(other as char).to_string(),
                            "`",
                        ]
                        .concat(),
                    ))
                }
            };
            pos += 1;
            expect(bytes, &mut pos, b'_')?;
            expect(bytes, &mut pos, b'{')?;
            let a = integer(bytes, &mut pos)?;
            expect(bytes, &mut pos, b',')?;
            let b = integer(bytes, &mut pos)?;
            expect(bytes, &mut pos, b'}')?;
            let mut exponent = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let braced = pos < bytes.len() && bytes[pos] == b'{';
                if braced {
                    pos += 1;
                }
                exponent = integer(bytes, &mut pos)?;
                if braced {
                    expect(bytes, &mut pos, b'}')?;
                }
            }
            if label == EdgeLabel::H && exponent != 1 {
                return Err(EchError::Parse(
                    "an h factor cannot carry an exponent (at most one h per direction)".into(),
                ));
            }
            out.push_edge(Edge::new(a, b, exponent, label)?)?;
        }
        Ok(out)
    }
}

fn expect(bytes: &[u8], pos: &mut usize, want: u8) -> Result<()> {
    if bytes.get(*pos) == Some(&want) {
        *pos += 1;
        Ok(())
    } else {
        Err(EchError::Parse(
            [
                "expected `",
                &(want as char).to_string(),
                "` at byte ",
                &pos.to_string(),
            ]
            .concat(),
        ))
    }
}

fn integer(bytes: &[u8], pos: &mut usize) -> Result<i64> {
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(EchError::Parse(
            ["expected integer at byte ", &start.to_string()].concat(),
        ));
    }
    core::str::from_utf8(&bytes[start..*pos])
        .expect("digits are utf8")
        .parse()
        .map_err(|_| EchError::Parse("integer too large".into()))
}
