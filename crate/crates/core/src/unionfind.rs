/// Plain union-find with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }

    pub fn component_count(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }

    /// Component label per element, numbered by first occurrence.
    pub fn labels(&mut self) -> Vec<usize> {
        let mut map = std::collections::HashMap::new();
        (0..self.parent.len())
            .map(|i| {
                let r = self.find(i);
                let next = map.len();
                *map.entry(r).or_insert(next)
            })
            .collect()
    }
}

/// Union-find tracking the parity of each element relative to its root.
#[derive(Debug, Clone)]
pub struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![0; n] }
    }

    pub fn find(&mut self, x: usize) -> (usize, u8) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // recompress
        let mut acc = 0u8;
        for &p in path.iter().rev() {
            acc ^= self.parity[p];
            self.parity[p] = acc;
            self.parent[p] = r;
        }
        (r, if path.is_empty() { 0 } else { self.parity[x] })
    }

    /// Records `parity(a) xor parity(b) == rel`. Returns false on conflict.
    pub fn relate(&mut self, a: usize, b: usize, rel: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        self.parent[ra] = rb;
        self.parity[ra] = pa ^ pb ^ rel;
        true
    }
}
