use alloc::boxed::Box;
use core::cmp::Ordering;
use core::fmt;

/// A rooted non-plane binary tree.
///
/// Children are stored in canonical order (smaller first under the derived
/// total order), so structural equality coincides with isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    // field order fixes the derived total order: size, then height, then shape
    size: usize,
    height: usize,
    children: Option<Box<(Tree, Tree)>>,
}

impl Tree {
    pub fn leaf() -> Self {
        Tree {
            size: 1,
            height: 0,
            children: None,
        }
    }

    /// Joins two subtrees under a new root. The pair is unordered.
    pub fn join(a: Tree, b: Tree) -> Self {
        let size = a.size + b.size;
        let height = 1 + a.height.max(b.height);
        let pair = match a.cmp(&b) {
            Ordering::Greater => (b, a),
            _ => (a, b),
        };
        Tree {
            size,
            height,
            children: Some(Box::new(pair)),
        }
    }

    /// Number of external nodes.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        self.children.as_deref().map(|(a, b)| (a, b))
    }

    /// Recomputes size and height from scratch and checks them against the
    /// cached values, along with the canonical child order.
    pub fn check_invariants(&self) -> bool {
        fn walk(t: &Tree) -> Option<(usize, usize)> {
            match t.children() {
                None => (t.size == 1 && t.height == 0).then_some((1, 0)),
                Some((a, b)) => {
                    if a > b {
                        return None;
                    }
                    let (sa, ha) = walk(a)?;
                    let (sb, hb) = walk(b)?;
                    let (s, h) = (sa + sb, 1 + ha.max(hb));
                    (t.size == s && t.height == h).then_some((s, h))
                }
            }
        }
        walk(self).is_some()
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parenthesised form: `.` for a leaf, `(ab)` for an internal node.
impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => f.write_str("."),
            Some((a, b)) => write!(f, "({a}{b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_and_join() {
        let l = Tree::leaf();
        assert_eq!((l.size(), l.height()), (1, 0));
        let cherry = Tree::join(Tree::leaf(), Tree::leaf());
        assert_eq!((cherry.size(), cherry.height()), (2, 1));
        let t = Tree::join(Tree::leaf(), cherry.clone());
        assert_eq!((t.size(), t.height()), (3, 2));
        assert!(t.check_invariants());
    }

    #[test]
    fn join_is_unordered() {
        let cherry = Tree::join(Tree::leaf(), Tree::leaf());
        let a = Tree::join(Tree::leaf(), cherry.clone());
        let b = Tree::join(cherry, Tree::leaf());
        assert_eq!(a, b);
        assert_eq!(alloc::format!("{a}"), "(.(..))");
    }
}
