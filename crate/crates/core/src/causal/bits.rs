//! Dense bit matrices for relations on a few hundred regions.

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let stride = n.div_ceil(64).max(1);
        Self {
            n,
            stride,
            words: vec![0; n * stride],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.words[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.words[i * self.stride + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.n);
        for i in 0..self.n {
            for j in ones(self.row(i)) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Reflexive-free transitive closure (paths of length ≥ 1).
    pub fn closure(&self) -> Self {
        let mut c = self.clone();
        for k in 0..self.n {
            let via = c.row(k).to_vec();
            for i in 0..self.n {
                if c.get(i, k) {
                    for (w, v) in c.row_mut(i).iter_mut().zip(&via) {
                        *w |= v;
                    }
                }
            }
        }
        c
    }
}

/// Indices of set bits.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * 64 + b)
        })
    })
}

/// First index set in `a & b & !c`.
pub(crate) fn first_and_not(a: &[u64], b: &[u64], c: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .zip(c)
        .enumerate()
        .find_map(|(k, ((&x, &y), &z))| {
            let w = x & y & !z;
            (w != 0).then(|| k * 64 + w.trailing_zeros() as usize)
        })
}

pub(crate) fn intersects3(a: &[u64], b: &[u64], c: &[u64]) -> bool {
    a.iter().zip(b).zip(c).any(|((&x, &y), &z)| x & y & z != 0)
}

/// a ⊆ b as bit sets.
pub(crate) fn is_within(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x & !y == 0)
}
