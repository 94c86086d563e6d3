use crate::graph::PriorityOrder;

const FROZEN: u8 = 1;
const BOUNDARY: u8 = 2;

/// Union-find over vertices. Each root carries the component size, its label
/// (the minimum-rank vertex) and the frozen / touches-boundary flags.
#[derive(Debug, Clone)]
pub struct ClusterForest {
    parent: Vec<u32>,
    size: Vec<u32>,
    label: Vec<u32>,
    flags: Vec<u8>,
}

impl ClusterForest {
    pub fn new(n: usize, boundary: &[bool]) -> ClusterForest {
        debug_assert_eq!(boundary.len(), n);
        ClusterForest {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            label: (0..n as u32).collect(),
            flags: boundary.iter().map(|&b| if b { BOUNDARY } else { 0 }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    #[inline]
    pub fn find(&mut self, v: usize) -> usize {
        let mut x = v as u32;
        // path halving
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x as usize
    }

    /// Root lookup without compression.
    pub fn find_immutable(&self, v: usize) -> usize {
        let mut x = v;
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }

    /// Merge the components rooted at `a` and `b` (both must be roots, both warm).
    /// Returns the new root.
    pub fn union_roots(&mut self, a: usize, b: usize, priority: &PriorityOrder) -> usize {
        debug_assert!(a != b);
        debug_assert!(!self.is_frozen(a) && !self.is_frozen(b));
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        let (la, lb) = (self.label[big], self.label[small]);
        if priority.rank(lb as usize) < priority.rank(la as usize) {
            self.label[big] = lb;
        }
        self.flags[big] |= self.flags[small] & BOUNDARY;
        big
    }

    pub fn size(&self, root: usize) -> u32 {
        self.size[root]
    }

    pub fn label(&self, root: usize) -> u32 {
        self.label[root]
    }

    pub fn is_frozen(&self, root: usize) -> bool {
        self.flags[root] & FROZEN != 0
    }

    pub fn touches_boundary(&self, root: usize) -> bool {
        self.flags[root] & BOUNDARY != 0
    }

    pub fn freeze(&mut self, root: usize) {
        self.flags[root] |= FROZEN;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn labels_track_minimum_rank(
            n in 2usize..50,
            seed in any::<u64>(),
            pairs in proptest::collection::vec((0usize..50, 0usize..50), 0..80),
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let prio = PriorityOrder::shuffled(n, &mut rng);
            let mut forest = ClusterForest::new(n, &vec![false; n]);
            let mut naive: Vec<usize> = (0..n).collect();
            for (a, b) in pairs {
                let (a, b) = (a % n, b % n);
                let (ra, rb) = (forest.find(a), forest.find(b));
                if ra != rb {
                    forest.union_roots(ra, rb, &prio);
                    let (ca, cb) = (naive[a], naive[b]);
                    for c in naive.iter_mut() {
                        if *c == cb { *c = ca; }
                    }
                }
            }
            for v in 0..n {
                let members: Vec<usize> = (0..n).filter(|&u| naive[u] == naive[v]).collect();
                let best = *members.iter().min_by_key(|&&u| prio.rank(u)).unwrap();
                let root = forest.find(v);
                prop_assert_eq!(forest.label(root) as usize, best);
                prop_assert_eq!(forest.size(root) as usize, members.len());
            }
        }
    }

    #[test]
    fn boundary_flag_propagates() {
        let prio = PriorityOrder::identity(3);
        let mut forest = ClusterForest::new(3, &[false, false, true]);
        let r = forest.union_roots(0, 1, &prio);
        assert!(!forest.touches_boundary(r));
        let r2 = forest.find(2);
        let r = forest.union_roots(r, r2, &prio);
        assert!(forest.touches_boundary(r));
        assert_eq!(forest.label(r), 0);
    }
}
