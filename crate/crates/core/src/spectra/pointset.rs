//! Subsets of a finite-depth scattered tree space.
//!
//! The space of depth `k` consists of all finite sequences of naturals of
//! length at most `k`. A sequence of length `< k` is the limit of its
//! children: its basic neighbourhoods are its cone minus finitely many child
//! cones. Sequences of length `k` are isolated.
//!
//! A set is stored as a tree whose node at `s` records whether `s` belongs to
//! the set, a *generic* child shared by all but finitely many indices, and
//! the finitely many exceptional children. Exceptional entries never equal
//! the generic one, so equal sets have equal trees.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the tree space: the path from the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<u64>);

impl Point {
    pub fn root() -> Self {
        Point(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u64) -> Point {
        let mut v = self.0.clone();
        v.push(i);
        Point(v)
    }
}

/// `root`, `/0/3`
impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct Node {
    here: bool,
    children: Option<Box<Children>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Children {
    generic: Node,
    special: BTreeMap<u64, Node>,
}

impl Node {
    fn empty() -> Node {
        Node::default()
    }

    fn full(r: u32) -> Node {
        Node {
            here: true,
            children: (r > 0).then(|| {
                Box::new(Children {
                    generic: Node::full(r - 1),
                    special: BTreeMap::new(),
                })
            }),
        }
    }

    fn is_empty(&self) -> bool {
        !self.here && self.children.is_none()
    }

    fn build(here: bool, generic: Node, special: BTreeMap<u64, Node>) -> Node {
        let special: BTreeMap<u64, Node> =
            special.into_iter().filter(|(_, n)| *n != generic).collect();
        let children = (!generic.is_empty() || !special.is_empty())
            .then(|| Box::new(Children { generic, special }));
        Node { here, children }
    }

    fn child(&self, i: u64) -> Node {
        match &self.children {
            None => Node::empty(),
            Some(c) => c.special.get(&i).unwrap_or(&c.generic).clone(),
        }
    }

    fn generic(&self) -> Node {
        self.children
            .as_ref()
            .map_or_else(Node::empty, |c| c.generic.clone())
    }

    fn special_keys(&self) -> Vec<u64> {
        self.children
            .as_ref()
            .map_or_else(Vec::new, |c| c.special.keys().copied().collect())
    }

    /// Combines two nodes pointwise with `op`, which must map `(false,
    /// false)` to `false`.
    fn zip(a: &Node, b: &Node, op: fn(bool, bool) -> bool) -> Node {
        if a.children.is_none() && b.children.is_none() {
            return Node {
                here: op(a.here, b.here),
                children: None,
            };
        }
        let mut keys = a.special_keys();
        keys.extend(b.special_keys());
        let special = keys
            .into_iter()
            .map(|k| (k, Node::zip(&a.child(k), &b.child(k), op)))
            .collect();
        Node::build(
            op(a.here, b.here),
            Node::zip(&a.generic(), &b.generic(), op),
            special,
        )
    }

    fn map_children(&self, r: u32, f: &dyn Fn(&Node, u32) -> Node, here: bool) -> Node {
        if r == 0 {
            return Node {
                here,
                children: None,
            };
        }
        let special = self
            .special_keys()
            .into_iter()
            .map(|k| (k, f(&self.child(k), r - 1)))
            .collect();
        Node::build(here, f(&self.generic(), r - 1), special)
    }

    fn complement(&self, r: u32) -> Node {
        self.map_children(r, &Node::complement, !self.here)
    }

    fn derivative(&self, r: u32) -> Node {
        let here = r > 0 && self.here && !self.generic().is_empty();
        self.map_children(r, &Node::derivative, here)
    }

    fn closure(&self, r: u32) -> Node {
        let here = self.here || (r > 0 && !self.generic().is_empty());
        self.map_children(r, &Node::closure, here)
    }

    fn contains(&self, path: &[u64]) -> bool {
        match path.split_first() {
            None => self.here,
            Some((i, rest)) => self.child(*i).contains(rest),
        }
    }

    fn first_point(&self, prefix: &mut Vec<u64>) -> bool {
        if self.here {
            return true;
        }
        let Some(c) = &self.children else {
            return false;
        };
        let mut i = 0;
        loop {
            let child = c.special.get(&i).unwrap_or(&c.generic);
            if !child.is_empty() {
                prefix.push(i);
                return child.first_point(prefix);
            }
            if i > c.special.keys().next_back().copied().unwrap_or(0) {
                // past every exception only the (empty) generic child remains
                return false;
            }
            i += 1;
        }
    }

    fn collect_points(&self, prefix: &mut Vec<u64>, out: &mut Vec<Point>) -> bool {
        if self.here {
            out.push(Point(prefix.clone()));
        }
        let Some(c) = &self.children else {
            return true;
        };
        if !c.generic.is_empty() {
            return false;
        }
        for (k, n) in &c.special {
            prefix.push(*k);
            let finite = n.collect_points(prefix, out);
            prefix.pop();
            if !finite {
                return false;
            }
        }
        true
    }

    fn describe(&self, r: u32, prefix: &str, out: &mut Vec<String>) {
        let here_label = if prefix.is_empty() { "root" } else { prefix };
        if r > 0 && *self == Node::full(r) {
            out.push(format!("cone({here_label})"));
            return;
        }
        if self.here {
            out.push(here_label.to_string());
        }
        let Some(c) = &self.children else {
            return;
        };
        if !c.generic.is_empty() {
            let label = if c.special.is_empty() {
                "*".to_string()
            } else {
                let keys: Vec<String> = c.special.keys().map(u64::to_string).collect();
                format!("*∉{{{}}}", keys.join(","))
            };
            c.generic.describe(r - 1, &format!("{prefix}/{label}"), out);
        }
        for (k, n) in &c.special {
            n.describe(r - 1, &format!("{prefix}/{k}"), out);
        }
    }
}

/// A subset of the tree space of a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    depth: u32,
    root: Node,
}

impl PointSet {
    pub fn empty(depth: u32) -> Self {
        PointSet {
            depth,
            root: Node::empty(),
        }
    }

    pub fn full(depth: u32) -> Self {
        PointSet {
            depth,
            root: Node::full(depth),
        }
    }

    fn check_point(depth: u32, p: &Point) -> Result<()> {
        if p.len() > depth as usize {
            return Err(Error::Model(format!(
                "point {p} deeper than the space (depth {depth})"
            )));
        }
        Ok(())
    }

    /// All points with prefix `p`.
    pub fn cone(depth: u32, p: &Point) -> Result<Self> {
        PointSet::check_point(depth, p)?;
        let mut node = Node::full(depth - p.len() as u32);
        for &i in p.0.iter().rev() {
            node = Node::build(false, Node::empty(), BTreeMap::from([(i, node)]));
        }
        Ok(PointSet { depth, root: node })
    }

    pub fn point(depth: u32, p: &Point) -> Result<Self> {
        PointSet::check_point(depth, p)?;
        let mut node = Node {
            here: true,
            children: None,
        };
        for &i in p.0.iter().rev() {
            node = Node::build(false, Node::empty(), BTreeMap::from([(i, node)]));
        }
        Ok(PointSet { depth, root: node })
    }

    pub fn points<'a>(depth: u32, ps: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        ps.into_iter().try_fold(PointSet::empty(depth), |acc, p| {
            Ok(acc.union(&PointSet::point(depth, p)?))
        })
    }

    /// All points of length `level`.
    pub fn level(depth: u32, level: u32) -> Result<Self> {
        if level > depth {
            return Err(Error::Model(format!(
                "level {level} deeper than the space (depth {depth})"
            )));
        }
        fn build(l: u32) -> Node {
            if l == 0 {
                return Node {
                    here: true,
                    children: None,
                };
            }
            Node::build(false, build(l - 1), BTreeMap::new())
        }
        Ok(PointSet {
            depth,
            root: build(level),
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    fn same_space(&self, other: &PointSet) {
        assert_eq!(
            self.depth, other.depth,
            "point sets from spaces of different depth"
        );
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.same_space(other);
        PointSet {
            depth: self.depth,
            root: Node::zip(&self.root, &other.root, |a, b| a || b),
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.same_space(other);
        PointSet {
            depth: self.depth,
            root: Node::zip(&self.root, &other.root, |a, b| a && b),
        }
    }

    pub fn minus(&self, other: &PointSet) -> PointSet {
        self.same_space(other);
        PointSet {
            depth: self.depth,
            root: Node::zip(&self.root, &other.root, |a, b| a && !b),
        }
    }

    pub fn complement(&self) -> PointSet {
        PointSet {
            depth: self.depth,
            root: self.root.complement(self.depth),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_empty()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.minus(other).is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.len() <= self.depth as usize && self.root.contains(&p.0)
    }

    /// Points of the set that are not limits of other points of the set.
    pub fn isolated(&self) -> PointSet {
        self.minus(&self.derivative())
    }

    /// The Cantor–Bendixson derivative: the non-isolated points.
    pub fn derivative(&self) -> PointSet {
        PointSet {
            depth: self.depth,
            root: self.root.derivative(self.depth),
        }
    }

    pub fn closure(&self) -> PointSet {
        PointSet {
            depth: self.depth,
            root: self.root.closure(self.depth),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    /// Least `α` with `S^(α) = ∅`.
    pub fn cb_rank(&self) -> usize {
        let mut s = self.clone();
        let mut rank = 0;
        while !s.is_empty() {
            s = s.derivative();
            rank += 1;
        }
        rank
    }

    /// The lexicographically least point.
    pub fn first_point(&self) -> Option<Point> {
        let mut prefix = Vec::new();
        self.root.first_point(&mut prefix).then_some(Point(prefix))
    }

    /// The points of a finite set, in lexicographic order.
    pub fn finite_points(&self) -> Option<Vec<Point>> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.root.collect_points(&mut prefix, &mut out).then(|| {
            out.sort();
            out
        })
    }

    pub fn is_finite(&self) -> bool {
        self.finite_points().is_some()
    }
}

/// A union of points and cones; `/*` stands for every child index not listed
/// explicitly next to it.
impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        self.root.describe(self.depth, "", &mut parts);
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join(" ∪ "))
        }
    }
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Set expressions as they appear in model files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SetExpr {
    Full,
    Empty,
    Cone(Point),
    Points(Vec<Point>),
    Level(u32),
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    Minus(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
}

impl SetExpr {
    pub fn eval(&self, depth: u32) -> Result<PointSet> {
        Ok(match self {
            SetExpr::Full => PointSet::full(depth),
            SetExpr::Empty => PointSet::empty(depth),
            SetExpr::Cone(p) => PointSet::cone(depth, p)?,
            SetExpr::Points(ps) => PointSet::points(depth, ps)?,
            SetExpr::Level(l) => PointSet::level(depth, *l)?,
            SetExpr::Union(es) => es.iter().try_fold(PointSet::empty(depth), |acc, e| {
                Ok::<_, Error>(acc.union(&e.eval(depth)?))
            })?,
            SetExpr::Intersection(es) => es.iter().try_fold(PointSet::full(depth), |acc, e| {
                Ok::<_, Error>(acc.intersection(&e.eval(depth)?))
            })?,
            SetExpr::Minus(a, b) => a.eval(depth)?.minus(&b.eval(depth)?),
            SetExpr::Complement(a) => a.eval(depth)?.complement(),
        })
    }

    /// Membership computed directly from the expression.
    pub fn contains(&self, p: &Point) -> bool {
        match self {
            SetExpr::Full => true,
            SetExpr::Empty => false,
            SetExpr::Cone(c) => p.0.starts_with(&c.0),
            SetExpr::Points(ps) => ps.contains(p),
            SetExpr::Level(l) => p.len() == *l as usize,
            SetExpr::Union(es) => es.iter().any(|e| e.contains(p)),
            SetExpr::Intersection(es) => es.iter().all(|e| e.contains(p)),
            SetExpr::Minus(a, b) => a.contains(p) && !b.contains(p),
            SetExpr::Complement(a) => !a.contains(p),
        }
    }

    /// A random expression over the space of depth `depth` whose explicit
    /// indices are all below `width`.
    pub fn random(rng: &mut impl Rng, depth: u32, width: u64, size: u32) -> SetExpr {
        let path = |rng: &mut dyn rand::RngCore| {
            let len = rng.random_range(0..=depth);
            Point((0..len).map(|_| rng.random_range(0..width)).collect())
        };
        if size == 0 {
            return match rng.random_range(0..5) {
                0 => SetExpr::Cone(path(rng)),
                1 => {
                    let n = rng.random_range(1..=3);
                    SetExpr::Points((0..n).map(|_| path(rng)).collect())
                }
                2 => SetExpr::Level(rng.random_range(0..=depth)),
                3 => SetExpr::Full,
                _ => SetExpr::Cone(path(rng)),
            };
        }
        let sub = |rng: &mut _| Box::new(SetExpr::random(rng, depth, width, size - 1));
        match rng.random_range(0..4) {
            0 => SetExpr::Union(vec![*sub(rng), *sub(rng)]),
            1 => SetExpr::Intersection(vec![*sub(rng), *sub(rng)]),
            2 => SetExpr::Minus(sub(rng), sub(rng)),
            _ => SetExpr::Complement(sub(rng)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[u64]) -> Point {
        Point(v.to_vec())
    }

    #[test]
    fn derivatives_of_full_spaces() {
        let one = PointSet::full(1);
        assert_eq!(
            one.derivative(),
            PointSet::point(1, &Point::root()).unwrap()
        );
        assert!(one.derivative().derivative().is_empty());
        for k in 0..5 {
            assert_eq!(PointSet::full(k).cb_rank(), k as usize + 1);
        }
        let leaves = PointSet::points(2, &[pt(&[0, 1]), pt(&[3, 3])]).unwrap();
        assert!(leaves.derivative().is_empty());
        assert_eq!(leaves.cb_rank(), 1);
        assert!(PointSet::empty(3).derivative().is_empty());
    }

    #[test]
    fn closures() {
        let finite = PointSet::points(2, &[pt(&[]), pt(&[4]), pt(&[0, 2])]).unwrap();
        assert_eq!(finite.closure(), finite);
        let leaves = PointSet::level(1, 1).unwrap();
        assert_eq!(leaves.closure(), PointSet::full(1));
        let cofinite = leaves.minus(&PointSet::points(1, &[pt(&[0]), pt(&[2])]).unwrap());
        assert_eq!(
            cofinite.closure(),
            PointSet::full(1).minus(&PointSet::points(1, &[pt(&[0]), pt(&[2])]).unwrap())
        );
        // leaves under /1 accumulate at /1 only
        let under = PointSet::cone(2, &pt(&[1]))
            .unwrap()
            .intersection(&PointSet::level(2, 2).unwrap());
        assert_eq!(under.closure(), PointSet::cone(2, &pt(&[1])).unwrap());
    }

    #[test]
    fn boolean_algebra() {
        let a = PointSet::cone(2, &pt(&[1])).unwrap();
        let b = PointSet::level(2, 1).unwrap();
        assert_eq!(a.complement().complement(), a);
        assert_eq!(a.union(&a.complement()), PointSet::full(2));
        assert!(a.intersection(&a.complement()).is_empty());
        assert_eq!(a.intersection(&b), PointSet::point(2, &pt(&[1])).unwrap());
        assert!(a.contains(&pt(&[1, 7])) && !a.contains(&pt(&[2, 1])));
        assert!(!a.contains(&pt(&[1, 7, 0])));
        assert!(PointSet::cone(1, &pt(&[0, 0])).is_err());
    }

    #[test]
    fn enumeration() {
        let s = PointSet::points(2, &[pt(&[3]), pt(&[0, 9]), pt(&[])]).unwrap();
        assert_eq!(s.first_point(), Some(Point::root()));
        assert_eq!(
            s.finite_points().unwrap(),
            vec![pt(&[]), pt(&[0, 9]), pt(&[3])]
        );
        let c =
            PointSet::full(1).minus(&PointSet::points(1, &[pt(&[]), pt(&[0]), pt(&[1])]).unwrap());
        assert_eq!(c.first_point(), Some(pt(&[2])));
        assert!(c.finite_points().is_none());
        assert_eq!(PointSet::empty(2).first_point(), None);
    }

    #[test]
    fn descriptions() {
        assert_eq!(PointSet::full(1).to_string(), "cone(root)");
        assert_eq!(PointSet::empty(1).to_string(), "∅");
        assert_eq!(
            PointSet::point(1, &Point::root()).unwrap().to_string(),
            "root"
        );
        let s = PointSet::level(1, 1)
            .unwrap()
            .minus(&PointSet::point(1, &pt(&[2])).unwrap());
        assert_eq!(s.to_string(), "/*∉{2}");
        assert_eq!(pt(&[0, 3]).to_string(), "/0/3");
    }

    #[test]
    fn expressions_match_trees() {
        use rand::SeedableRng;
        let mut rng = rand_xorshift::XorShiftRng::seed_from_u64(1);
        for _ in 0..100 {
            let e = SetExpr::random(&mut rng, 3, 3, 3);
            let s = e.eval(3).unwrap();
            for a in [0, 1, 2, 50] {
                for p in [
                    pt(&[]),
                    pt(&[a]),
                    pt(&[a, 1]),
                    pt(&[2, a]),
                    pt(&[a, 0, a]),
                    pt(&[1, 50, 2]),
                ] {
                    assert_eq!(s.contains(&p), e.contains(&p), "{e:?} at {p}");
                }
            }
        }
    }

    #[test]
    fn model_syntax() {
        let e: SetExpr = serde_json::from_str(
            r#"{"union": [{"cone": [1]}, {"points": [[0], []]}, "empty", {"level": 1}]}"#,
        )
        .unwrap();
        let s = e.eval(1).unwrap();
        assert_eq!(s, PointSet::full(1));
        assert!(serde_json::from_str::<SetExpr>(r#"{"cones": [1]}"#).is_err());
    }
}
