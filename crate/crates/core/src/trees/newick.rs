//! Newick reading and writing with exact branch lengths.
//!
//! Leaf labels must be the integers `1..=n`; every branch except the root's
//! needs a length, written as `p/q`, an integer, or a terminating decimal.

use crate::error::{NewickError, NewickErrorKind};
use crate::scalar::Scalar;

use super::{Edge, WeightedTree};

struct Parser<'a, S> {
    src: &'a [u8],
    pos: usize,
    edges: Vec<Edge<S>>,
    node_count: usize,
    leaves: Vec<(usize, usize, usize)>, // (label, node, position)
}

impl<'a, S: Scalar> Parser<'a, S> {
    fn err(&self, kind: NewickErrorKind) -> NewickError {
        NewickError {
            pos: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), NewickError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(NewickErrorKind::Unexpected(x as char))),
            None => Err(self.err(NewickErrorKind::Eof)),
        }
    }

    fn token(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if b"(),:;".contains(&c) || c.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn new_node(&mut self) -> usize {
        self.node_count += 1;
        self.node_count - 1
    }

    /// Parses one subtree and returns its node.
    fn subtree(&mut self) -> Result<usize, NewickError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let node = self.new_node();
                loop {
                    let child = self.subtree()?;
                    let weight = self.length()?;
                    self.edges.push(Edge {
                        a: node,
                        b: child,
                        weight,
                    });
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(x) => return Err(self.err(NewickErrorKind::Unexpected(x as char))),
                        None => return Err(self.err(NewickErrorKind::Eof)),
                    }
                }
                let at = self.pos;
                let label = self.token();
                if !label.is_empty() {
                    self.pos = at;
                    return Err(self.err(NewickErrorKind::InternalLabel(label)));
                }
                Ok(node)
            }
            Some(_) => {
                let at = self.pos;
                let label = self.token();
                if label.is_empty() {
                    return Err(match self.peek() {
                        Some(x) if x != b':' => self.err(NewickErrorKind::Unexpected(x as char)),
                        Some(_) => self.err(NewickErrorKind::UnlabeledLeaf),
                        None => self.err(NewickErrorKind::Eof),
                    });
                }
                let value = label
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1 && label.bytes().all(|b| b.is_ascii_digit()));
                let Some(value) = value else {
                    self.pos = at;
                    return Err(self.err(NewickErrorKind::BadLabel(label)));
                };
                let node = self.new_node();
                self.leaves.push((value, node, at));
                Ok(node)
            }
            None => Err(self.err(NewickErrorKind::Eof)),
        }
    }

    fn length(&mut self) -> Result<S, NewickError> {
        if self.peek() != Some(b':') {
            return Err(self.err(NewickErrorKind::MissingLength));
        }
        self.pos += 1;
        let at = self.pos;
        let text = self.token();
        if text.is_empty() {
            return Err(self.err(NewickErrorKind::MissingLength));
        }
        match S::parse_exact(&text) {
            Some(w) if w.is_negative() => {
                self.pos = at;
                Err(self.err(NewickErrorKind::NegativeLength(text)))
            }
            Some(w) => Ok(w),
            None => {
                self.pos = at;
                Err(self.err(NewickErrorKind::BadLength(text)))
            }
        }
    }
}

/// Parses a Newick string into a rooted [`WeightedTree`].
///
/// The outermost node becomes the root. A root with a single child is
/// dropped (it would otherwise be an unlabelled leaf); a root branch length
/// is accepted and ignored.
pub fn parse_newick<S: Scalar>(text: &str) -> Result<WeightedTree<S>, NewickError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        edges: Vec::new(),
        node_count: 0,
        leaves: Vec::new(),
    };
    let root = p.subtree()?;
    if p.peek() == Some(b':') {
        p.length()?;
    }
    p.expect(b';')?;
    if p.peek().is_some() {
        return Err(p.err(NewickErrorKind::Trailing));
    }

    let n = p.leaves.len();
    if n < 2 {
        return Err(NewickError {
            pos: 0,
            kind: NewickErrorKind::TooFewLeaves,
        });
    }
    let mut seen = vec![false; n];
    for &(label, _, at) in &p.leaves {
        if label > n {
            // some label in 1..=n must then be missing
            let missing = (1..=n)
                .find(|&l| !p.leaves.iter().any(|x| x.0 == l))
                .unwrap_or(n);
            return Err(NewickError {
                pos: at,
                kind: NewickErrorKind::MissingLabel { n, missing },
            });
        }
        if seen[label - 1] {
            return Err(NewickError {
                pos: at,
                kind: NewickErrorKind::DuplicateLabel(label),
            });
        }
        seen[label - 1] = true;
    }

    let mut edges = p.edges;
    let mut node_count = p.node_count;
    let mut root = root;
    let root_degree = edges.iter().filter(|e| e.a == root || e.b == root).count();
    if root_degree == 1 && !p.leaves.iter().any(|l| l.1 == root) {
        // drop the dangling root and renumber the last node into its slot
        let idx = edges.iter().position(|e| e.a == root).unwrap();
        let child = edges.remove(idx).b;
        let last = node_count - 1;
        let remap = |u: usize| if u == last { root } else { u };
        for e in &mut edges {
            e.a = remap(e.a);
            e.b = remap(e.b);
        }
        for l in &mut p.leaves {
            l.1 = remap(l.1);
        }
        root = remap(child);
        node_count -= 1;
    }
    let leaves: Vec<(usize, usize)> = p.leaves.iter().map(|&(l, node, _)| (l, node)).collect();
    Ok(WeightedTree::new(node_count, edges, &leaves, Some(root))
        .expect("parser output is always a valid tree"))
}

/// Writes `tree` as Newick. Children are ordered by their smallest leaf
/// label; the root is the tree's root if set, otherwise the neighbour of
/// leaf 1.
pub fn serialize_newick<S: Scalar>(tree: &WeightedTree<S>) -> String {
    let root = tree
        .root()
        .unwrap_or_else(|| tree.neighbors(tree.leaf_node(1))[0].0);
    if tree.is_leaf(root) {
        // a single edge between two leaves
        let w = &tree.edges()[0].weight;
        return format!("(1:0,2:{w});");
    }
    let mut out = String::new();
    let min_leaf = min_leaf_below(tree, root);
    write_node(tree, root, usize::MAX, &min_leaf, &mut out);
    out.push(';');
    out
}

fn min_leaf_below<S: Scalar>(tree: &WeightedTree<S>, root: usize) -> Vec<usize> {
    let parent = tree.parents_from(root);
    let mut best: Vec<usize> = (0..tree.node_count())
        .map(|u| tree.label_of(u).unwrap_or(usize::MAX))
        .collect();
    // process deepest-first by walking BFS order backwards
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &(v, _) in tree.neighbors(u) {
            if parent[v].is_some_and(|(p, _)| p == u) {
                order.push(v);
            }
        }
        i += 1;
    }
    for &u in order.iter().rev() {
        if let Some((p, _)) = parent[u] {
            best[p] = best[p].min(best[u]);
        }
    }
    best
}

fn write_node<S: Scalar>(
    tree: &WeightedTree<S>,
    u: usize,
    from: usize,
    min_leaf: &[usize],
    out: &mut String,
) {
    if let Some(l) = tree.label_of(u) {
        out.push_str(&l.to_string());
        return;
    }
    let mut kids: Vec<(usize, usize)> = tree
        .neighbors(u)
        .iter()
        .copied()
        .filter(|&(v, _)| v != from)
        .collect();
    kids.sort_by_key(|&(v, _)| min_leaf[v]);
    out.push('(');
    for (k, (v, e)) in kids.into_iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write_node(tree, v, u, min_leaf, out);
        out.push(':');
        out.push_str(&tree.edges()[e].weight.to_string());
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::NewickErrorKind as K;
    use crate::Rational;
    use num_traits::Zero;

    fn parse(s: &str) -> Result<WeightedTree<Rational>, NewickError> {
        parse_newick(s)
    }

    #[test]
    fn parses_quartet() {
        let t = parse("((1:1,2:1):1,3:1,4:1);").unwrap();
        assert_eq!(t.n(), 4);
        assert_eq!(t.edges().len(), 5);
        assert_eq!(t.node_count(), 6);
    }

    #[test]
    fn parses_two_leaf_zero_tree() {
        let t = parse("(1:0,2:0);").unwrap();
        assert_eq!(t.n(), 2);
        assert!(t.edges().iter().all(|e| e.weight.is_zero()));
        assert_eq!(serialize_newick(&t), "(1:0,2:0);");
    }

    #[test]
    fn parses_rationals_and_decimals() {
        let t = parse(" ( 1 : 1/3 , 2 : 0.25 ) : 7 ; ").unwrap();
        assert_eq!(*t.distance_matrix().get(1, 2), Rational::from_frac(7, 12));
    }

    #[test]
    fn error_kinds() {
        let kind = |s: &str| parse(s).unwrap_err().kind;
        assert_eq!(kind("((1:1,1:1):1,3:1);"), K::DuplicateLabel(1));
        assert!(matches!(
            kind("(1:1,3:1);"),
            K::MissingLabel { n: 2, missing: 2 }
        ));
        assert!(matches!(kind("(1:-1,2:1);"), K::NegativeLength(_)));
        assert_eq!(kind("(1:1,2);"), K::MissingLength);
        assert!(matches!(kind("(1:x,2:1);"), K::BadLength(_)));
        assert!(matches!(kind("(a:1,2:1);"), K::BadLabel(_)));
        assert!(matches!(kind("(0:1,2:1);"), K::BadLabel(_)));
        assert!(matches!(kind("((1:1,2:1)x:1,3:1);"), K::InternalLabel(_)));
        assert_eq!(kind("(1:1,2:1)"), K::Eof);
        assert_eq!(kind("(1:1,2:1);x"), K::Trailing);
        assert_eq!(kind("1;"), K::TooFewLeaves);
        assert_eq!(kind("(:1,2:1);"), K::UnlabeledLeaf);
    }

    #[test]
    fn syntax_error_reports_position() {
        let e = parse("((1:1,2:1):1,3:1 4:1);").unwrap_err();
        assert_eq!(e.pos, 17);
        assert_eq!(e.kind, K::Unexpected('4'));
    }

    #[test]
    fn single_child_root_is_dropped() {
        let t = parse("((1:1,2:2,3:1):5);").unwrap();
        assert_eq!(t.node_count(), 4);
        assert_eq!(*t.distance_matrix().get(1, 2), Rational::from_int(3));
    }

    #[test]
    fn serialize_orders_children_by_smallest_leaf() {
        let t = parse("(4:1,(3:1/2,2:1):1,1:1);").unwrap();
        assert_eq!(serialize_newick(&t), "(1:1,(2:1,3:1/2):1,4:1);");
    }

    #[test]
    fn quartet_round_trip_keeps_distances() {
        let t = parse("((1:1,2:1):1,3:1,4:1);").unwrap();
        let s = serialize_newick(&t);
        assert_eq!(s, "((1:1,2:1):1,3:1,4:1);");
        assert_eq!(parse(&s).unwrap().distance_matrix(), t.distance_matrix());
    }
}
