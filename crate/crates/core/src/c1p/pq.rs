//! PQ-tree for the consecutive-ones property.
//!
//! Reductions follow the classic template set (P2–P6, Q2, Q3). Instead of
//! the bubbling phase, every reduction recounts full leaves over the whole
//! tree, which costs O(m) per row and keeps parent bookkeeping trivial.

use fixedbitset::FixedBitSet;

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Leaf(usize),
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mark {
    Empty,
    Full,
    Partial,
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    children: Vec<usize>,
    parent: usize,
}

#[derive(Clone, Debug)]
pub struct PqTree {
    nodes: Vec<Node>,
    free: Vec<usize>,
    root: usize,
    columns: usize,
    leaf_count: Vec<usize>,
    full_count: Vec<usize>,
    mark: Vec<Mark>,
}

impl PqTree {
    /// The universal tree over `columns` leaves: every order allowed.
    pub fn new(columns: usize) -> Self {
        let mut t = PqTree {
            nodes: Vec::with_capacity(2 * columns + 1),
            free: Vec::new(),
            root: NONE,
            columns,
            leaf_count: Vec::new(),
            full_count: Vec::new(),
            mark: Vec::new(),
        };
        let leaves: Vec<usize> = (0..columns).map(|c| t.alloc(Kind::Leaf(c), Vec::new())).collect();
        t.root = match columns {
            0 => NONE,
            1 => leaves[0],
            _ => t.alloc(Kind::P, leaves),
        };
        t
    }

    fn alloc(&mut self, kind: Kind, children: Vec<usize>) -> usize {
        let node = Node {
            kind,
            children,
            parent: NONE,
        };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id] = node;
                id
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        for i in 0..self.nodes[id].children.len() {
            let ch = self.nodes[id].children[i];
            self.nodes[ch].parent = id;
        }
        if self.mark.len() < self.nodes.len() {
            self.mark.resize(self.nodes.len(), Mark::Empty);
            self.full_count.resize(self.nodes.len(), 0);
            self.leaf_count.resize(self.nodes.len(), 0);
        }
        id
    }

    fn release(&mut self, id: usize) {
        self.nodes[id].children.clear();
        self.nodes[id].parent = NONE;
        self.free.push(id);
    }

    fn set_children(&mut self, id: usize, children: Vec<usize>) {
        for &ch in &children {
            self.nodes[ch].parent = id;
        }
        self.nodes[id].children = children;
    }

    /// Moves `from`'s content into `into` (keeping `into`'s place in the tree).
    fn absorb(&mut self, into: usize, from: usize) {
        let kind = self.nodes[from].kind;
        let children = std::mem::take(&mut self.nodes[from].children);
        self.nodes[into].kind = kind;
        self.set_children(into, children);
        self.release(from);
    }

    /// A single node standing for `members`, wrapping them in a P-node when
    /// there are several.
    fn group(&mut self, members: Vec<usize>, mark: Mark) -> Option<usize> {
        match members.len() {
            0 => None,
            1 => Some(members[0]),
            _ => {
                let id = self.alloc(Kind::P, members);
                self.mark[id] = mark;
                Some(id)
            }
        }
    }

    /// Preorder of the whole tree.
    fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        if self.root == NONE {
            return out;
        }
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().rev());
        }
        out
    }

    fn count(&mut self, row: &FixedBitSet) {
        let order = self.preorder();
        for &x in order.iter().rev() {
            let (leaves, full) = match self.nodes[x].kind {
                Kind::Leaf(c) => (1, usize::from(row.contains(c))),
                _ => self.nodes[x].children.iter().fold((0, 0), |(l, f), &ch| {
                    (l + self.leaf_count[ch], f + self.full_count[ch])
                }),
            };
            self.leaf_count[x] = leaves;
            self.full_count[x] = full;
            self.mark[x] = if full == 0 {
                Mark::Empty
            } else if full == leaves {
                Mark::Full
            } else {
                Mark::Partial
            };
        }
    }

    /// Restricts the tree to orders where the columns in `row` are
    /// consecutive. Returns false (leaving the tree unusable) when no
    /// remaining order satisfies the row.
    pub fn reduce(&mut self, row: &FixedBitSet) -> bool {
        let size = row.count_ones(..);
        if size <= 1 || size >= self.columns {
            return true;
        }
        self.count(row);

        let mut pertinent = self.root;
        while let Some(&ch) = self.nodes[pertinent]
            .children
            .iter()
            .find(|&&ch| self.full_count[ch] == size)
        {
            pertinent = ch;
        }
        if self.mark[pertinent] == Mark::Full {
            return true;
        }

        // Post-order over the partial nodes below the pertinent root.
        let mut todo = Vec::new();
        let mut stack = vec![pertinent];
        while let Some(x) = stack.pop() {
            todo.push(x);
            for &ch in &self.nodes[x].children {
                if self.mark[ch] == Mark::Partial {
                    stack.push(ch);
                }
            }
        }
        for &x in todo.iter().rev() {
            let ok = match self.nodes[x].kind {
                Kind::P => self.reduce_p(x, x == pertinent),
                Kind::Q => self.reduce_q(x, x == pertinent),
                Kind::Leaf(_) => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn split_children(&self, x: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let (mut empty, mut full, mut partial) = (Vec::new(), Vec::new(), Vec::new());
        for &ch in &self.nodes[x].children {
            match self.mark[ch] {
                Mark::Empty => empty.push(ch),
                Mark::Full => full.push(ch),
                Mark::Partial => partial.push(ch),
            }
        }
        (empty, full, partial)
    }

    fn reduce_p(&mut self, x: usize, is_root: bool) -> bool {
        let (empty, full, partial) = self.split_children(x);
        if !is_root {
            // Result is a partial Q-node ordered empty side first.
            let mut seq = Vec::new();
            match partial.as_slice() {
                [] => {}
                [y] => {
                    let inner = std::mem::take(&mut self.nodes[*y].children);
                    self.release(*y);
                    seq = inner;
                }
                _ => return false,
            }
            let e = self.group(empty, Mark::Empty);
            let f = self.group(full, Mark::Full);
            let mut children = Vec::with_capacity(seq.len() + 2);
            children.extend(e);
            children.append(&mut seq);
            children.extend(f);
            self.nodes[x].kind = Kind::Q;
            self.set_children(x, children);
            return true;
        }
        match partial.as_slice() {
            [] => {
                let f = self.group(full, Mark::Full);
                let mut children = empty;
                children.extend(f);
                self.set_children(x, children);
            }
            [y] => {
                let y = *y;
                if let Some(f) = self.group(full, Mark::Full) {
                    self.nodes[y].children.push(f);
                    self.nodes[f].parent = y;
                }
                let mut children = empty;
                children.push(y);
                self.finish_root_p(x, children, y);
            }
            [y1, y2] => {
                let (y1, y2) = (*y1, *y2);
                let mut merged = std::mem::take(&mut self.nodes[y1].children);
                if let Some(f) = self.group(full, Mark::Full) {
                    merged.push(f);
                }
                let mut tail = std::mem::take(&mut self.nodes[y2].children);
                tail.reverse();
                merged.append(&mut tail);
                self.release(y2);
                self.set_children(y1, merged);
                self.mark[y1] = Mark::Partial;
                let mut children = empty;
                children.push(y1);
                self.finish_root_p(x, children, y1);
            }
            _ => return false,
        }
        true
    }

    fn finish_root_p(&mut self, x: usize, children: Vec<usize>, only: usize) {
        if children.len() == 1 {
            self.absorb(x, only);
        } else {
            self.set_children(x, children);
        }
    }

    fn reduce_q(&mut self, x: usize, is_root: bool) -> bool {
        let marks: Vec<Mark> = self.nodes[x].children.iter().map(|&c| self.mark[c]).collect();
        if !is_root {
            let forward = Self::is_singly_partial(&marks);
            if !forward {
                let rev: Vec<Mark> = marks.iter().rev().copied().collect();
                if !Self::is_singly_partial(&rev) {
                    return false;
                }
                self.nodes[x].children.reverse();
            }
            self.splice_partials(x, None);
            return true;
        }
        let Some(first) = marks.iter().position(|&k| k != Mark::Empty) else {
            return false;
        };
        let last = marks.iter().rposition(|&k| k != Mark::Empty).unwrap();
        let block = &marks[first..=last];
        if block.len() < 2 {
            return false;
        }
        let inner_ok = block[1..block.len() - 1].iter().all(|&k| k == Mark::Full);
        if !inner_ok {
            return false;
        }
        let right_partial = (marks[last] == Mark::Partial).then_some(last);
        self.splice_partials(x, right_partial);
        true
    }

    /// `E* P? F*` with at least one non-empty child.
    fn is_singly_partial(marks: &[Mark]) -> bool {
        let mut i = 0;
        while i < marks.len() && marks[i] == Mark::Empty {
            i += 1;
        }
        if i < marks.len() && marks[i] == Mark::Partial {
            i += 1;
        }
        marks[i..].iter().all(|&k| k == Mark::Full)
    }

    /// Replaces partial children of `x` by their children. Partial children
    /// are stored empty side first; the one at index `reversed_at` is
    /// spliced in reverse so its full side faces left.
    fn splice_partials(&mut self, x: usize, reversed_at: Option<usize>) {
        let old = std::mem::take(&mut self.nodes[x].children);
        let mut children = Vec::with_capacity(old.len() + 4);
        for (i, ch) in old.into_iter().enumerate() {
            if self.mark[ch] == Mark::Partial {
                let mut inner = std::mem::take(&mut self.nodes[ch].children);
                if reversed_at == Some(i) {
                    inner.reverse();
                }
                children.append(&mut inner);
                self.release(ch);
            } else {
                children.push(ch);
            }
        }
        self.set_children(x, children);
    }

    /// Leaf columns in left-to-right order.
    pub fn frontier(&self) -> Vec<usize> {
        self.preorder()
            .into_iter()
            .filter_map(|x| match self.nodes[x].kind {
                Kind::Leaf(c) => Some(c),
                _ => None,
            })
            .collect()
    }
}
