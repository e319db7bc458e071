/// Disjoint sets over ids `0..m`; the representative of a class is always
/// its least id.
#[derive(Debug, Clone)]
pub struct Partition {
    parent: Vec<u32>,
}

/// Equal when they have the same classes, whatever the internal forest.
impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && (0..self.len() as u32).all(|i| self.rep(i) == other.rep(i))
    }
}

impl Eq for Partition {}

impl Partition {
    pub fn singletons(m: usize) -> Partition {
        Partition {
            parent: (0..m as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Representative without path compression.
    pub fn rep(&self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        match ra.cmp(&rb) {
            std::cmp::Ordering::Less => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Greater => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Equal => {}
        }
    }

    /// Merge every class of `other` into `self`.
    pub fn merge(&mut self, other: &Partition) {
        assert_eq!(self.len(), other.len(), "partition sizes");
        for i in 0..other.len() as u32 {
            let r = other.rep(i);
            if r != i {
                self.union(i, r);
            }
        }
    }

    pub fn same(&self, a: u32, b: u32) -> bool {
        self.rep(a) == self.rep(b)
    }

    /// Classes as sorted id lists, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<u32>> {
        let mut slot = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<u32>> = Vec::new();
        for i in 0..self.len() as u32 {
            let r = self.rep(i) as usize;
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(i);
        }
        out
    }

    pub fn num_classes(&self) -> usize {
        (0..self.len() as u32).filter(|&i| self.parent[i as usize] == i).count()
    }

    /// Representative of every id, as a flat vector.
    pub fn labels(&self) -> Vec<u32> {
        (0..self.len() as u32).map(|i| self.rep(i)).collect()
    }
}

/// The finest partition of `0..m` merging every given pair.
pub fn equiv_closure(m: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Partition {
    let mut p = Partition::singletons(m);
    for (a, b) in pairs {
        p.union(a, b);
    }
    p
}
