//! Binary tree shapes backing the kinetic structures.
//!
//! The heap keeps a complete tree in an array (`parent = (i-1)/2`); the hanger
//! keeps an explicit linked tree grown by random descents. Both expose the same
//! positional API so certificate bookkeeping does not care which one is in use.

use super::ElemId;

#[derive(Debug, Clone)]
pub(crate) struct LinkedNode {
    pub elem: ElemId,
    pub parent: Option<usize>,
    pub kids: [Option<usize>; 2],
}

#[derive(Debug, Clone)]
pub(crate) enum Tree {
    Complete(Vec<ElemId>),
    Linked {
        nodes: Vec<Option<LinkedNode>>,
        free: Vec<usize>,
        root: Option<usize>,
    },
}

impl Tree {
    pub fn root(&self) -> Option<usize> {
        match self {
            Tree::Complete(v) => (!v.is_empty()).then_some(0),
            Tree::Linked { root, .. } => *root,
        }
    }

    pub fn elem(&self, p: usize) -> ElemId {
        match self {
            Tree::Complete(v) => v[p],
            Tree::Linked { nodes, .. } => nodes[p].as_ref().expect("live node").elem,
        }
    }

    pub fn set_elem(&mut self, p: usize, e: ElemId) {
        match self {
            Tree::Complete(v) => v[p] = e,
            Tree::Linked { nodes, .. } => nodes[p].as_mut().expect("live node").elem = e,
        }
    }

    pub fn is_live(&self, p: usize) -> bool {
        match self {
            Tree::Complete(v) => p < v.len(),
            Tree::Linked { nodes, .. } => nodes.get(p).is_some_and(Option::is_some),
        }
    }

    pub fn parent(&self, p: usize) -> Option<usize> {
        match self {
            Tree::Complete(_) => (p > 0).then(|| (p - 1) / 2),
            Tree::Linked { nodes, .. } => nodes[p].as_ref().and_then(|n| n.parent),
        }
    }

    pub fn kids(&self, p: usize) -> [Option<usize>; 2] {
        match self {
            Tree::Complete(v) => {
                let k = |i: usize| (i < v.len()).then_some(i);
                [k(2 * p + 1), k(2 * p + 2)]
            }
            Tree::Linked { nodes, .. } => nodes[p].as_ref().map_or([None, None], |n| n.kids),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Tree::Complete(v) => v.len(),
            Tree::Linked { nodes, free, .. } => nodes.len() - free.len(),
        }
    }

    /// Upper bound on node indices, for sizing side tables.
    pub fn capacity(&self) -> usize {
        match self {
            Tree::Complete(v) => v.len(),
            Tree::Linked { nodes, .. } => nodes.len(),
        }
    }

    pub fn depth(&self, mut p: usize) -> usize {
        let mut d = 0;
        while let Some(q) = self.parent(p) {
            d += 1;
            p = q;
        }
        d
    }

    /// Allocates a linked node under `parent` at `slot` (or as root).
    pub fn alloc_linked(&mut self, elem: ElemId, parent: Option<(usize, usize)>) -> usize {
        let Tree::Linked { nodes, free, root } = self else {
            unreachable!("alloc_linked on a complete tree");
        };
        let node = LinkedNode {
            elem,
            parent: parent.map(|(p, _)| p),
            kids: [None, None],
        };
        let idx = match free.pop() {
            Some(i) => {
                nodes[i] = Some(node);
                i
            }
            None => {
                nodes.push(Some(node));
                nodes.len() - 1
            }
        };
        match parent {
            Some((p, slot)) => nodes[p].as_mut().expect("live parent").kids[slot] = Some(idx),
            None => *root = Some(idx),
        }
        idx
    }

    /// Detaches and frees a linked leaf.
    pub fn free_linked_leaf(&mut self, p: usize) {
        let Tree::Linked { nodes, free, root } = self else {
            unreachable!("free_linked_leaf on a complete tree");
        };
        let node = nodes[p].take().expect("live node");
        debug_assert!(node.kids.iter().all(Option::is_none));
        match node.parent {
            Some(q) => {
                let parent = nodes[q].as_mut().expect("live parent");
                for k in parent.kids.iter_mut() {
                    if *k == Some(p) {
                        *k = None;
                    }
                }
            }
            None => *root = None,
        }
        free.push(p);
    }
}
