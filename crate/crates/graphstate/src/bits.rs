//! Word-packed GF(2) vectors and matrices.
//!
//! Cut-rank queries sit in the inner loop of the width dynamic program, so
//! rank computation is plain Gaussian elimination over 64-bit words.

/// Number of `u64` words needed to hold `n` bits.
pub const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// A fixed-length bit vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Vec {
    words: Vec<u64>,
    len: usize,
}

impl Gf2Vec {
    pub fn zeros(len: usize) -> Self {
        Gf2Vec {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn and(&self, other: &Gf2Vec) -> Gf2Vec {
        debug_assert_eq!(self.len, other.len);
        Gf2Vec {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn and_not(&self, other: &Gf2Vec) -> Gf2Vec {
        debug_assert_eq!(self.len, other.len);
        Gf2Vec {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
            len: self.len,
        }
    }

    /// Complement within the fixed length.
    pub fn not(&self) -> Gf2Vec {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let tail = self.len & 63;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Gf2Vec {
            words,
            len: self.len,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the AND with `other` — the GF(2) inner product.
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b))
            .count_ones()
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi << 6) | b)
                }
            })
        })
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Gf2Vec {
        let mut v = Gf2Vec::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }
}

impl std::fmt::Debug for Gf2Vec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// A dense GF(2) matrix stored as bit-vector rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gf2Mat {
    pub rows: Vec<Gf2Vec>,
    pub ncols: usize,
}

impl Gf2Mat {
    pub fn new(rows: Vec<Gf2Vec>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        Gf2Mat { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rank(&self) -> usize {
        rank_of(self.rows.iter().cloned())
    }
}

/// GF(2) rank by greedy elimination keyed on the lowest set bit.
pub fn rank_of(rows: impl IntoIterator<Item = Gf2Vec>) -> usize {
    let mut basis: Vec<(usize, Gf2Vec)> = Vec::new(); // (pivot, reduced row)
    for row in rows {
        let mut cur = row;
        loop {
            let Some(pivot) = cur.iter_ones().next() else {
                break;
            };
            if let Some((_, b)) = basis.iter().find(|(p, _)| *p == pivot) {
                let b = b.clone();
                cur.xor_assign(&b);
            } else {
                basis.push((pivot, cur));
                break;
            }
        }
    }
    basis.len()
}

/// Reduced row-echelon basis of the row space.
///
/// Returns the basis rows together with their pivot columns, lowest index
/// first. Each basis row has a 1 at its own pivot and 0 at every other pivot,
/// so the coefficient vector of an arbitrary row-space member is just its
/// restriction to the pivot columns.
pub fn rref(rows: impl IntoIterator<Item = Gf2Vec>) -> (Vec<Gf2Vec>, Vec<usize>) {
    let mut basis: Vec<(usize, Gf2Vec)> = Vec::new();
    for row in rows {
        let mut cur = row;
        loop {
            let Some(pivot) = cur.iter_ones().next() else {
                break;
            };
            if let Some(pos) = basis.iter().position(|(p, _)| *p == pivot) {
                let b = basis[pos].1.clone();
                cur.xor_assign(&b);
            } else {
                // reduce existing rows by the new pivot
                for (_, b) in basis.iter_mut() {
                    if b.get(pivot) {
                        b.xor_assign(&cur);
                    }
                }
                basis.push((pivot, cur));
                break;
            }
        }
    }
    basis.sort_by_key(|(p, _)| *p);
    let pivots = basis.iter().map(|(p, _)| *p).collect();
    let rows = basis.into_iter().map(|(_, r)| r).collect();
    (rows, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(bits: &[u8]) -> Gf2Vec {
        Gf2Vec::from_indices(
            bits.len(),
            bits.iter()
                .enumerate()
                .filter(|(_, b)| **b == 1)
                .map(|(i, _)| i),
        )
    }

    #[test]
    fn rank_basic() {
        let rows = vec![vec_of(&[1, 0, 1]), vec_of(&[0, 1, 1]), vec_of(&[1, 1, 0])];
        assert_eq!(rank_of(rows), 2);
        assert_eq!(rank_of(vec![Gf2Vec::zeros(5)]), 0);
    }

    #[test]
    fn rref_reduces_against_pivots() {
        let rows = vec![
            vec_of(&[1, 1, 0, 1]),
            vec_of(&[0, 1, 1, 0]),
            vec_of(&[1, 0, 1, 1]),
        ];
        let (basis, pivots) = rref(rows.clone());
        assert_eq!(basis.len(), 2);
        assert_eq!(pivots, vec![0, 1]);
        // each basis row is zero on the other pivots
        for (i, r) in basis.iter().enumerate() {
            for (j, p) in pivots.iter().enumerate() {
                assert_eq!(r.get(*p), i == j);
            }
        }
        // every original row is the pivot-coefficient combination of the basis
        for row in rows {
            let mut rec = Gf2Vec::zeros(4);
            for (r, p) in basis.iter().zip(&pivots) {
                if row.get(*p) {
                    rec.xor_assign(r);
                }
            }
            assert_eq!(rec, row);
        }
    }

    #[test]
    fn not_masks_tail_bits() {
        let v = Gf2Vec::from_indices(70, [0, 69]);
        let c = v.not();
        assert!(!c.get(0) && !c.get(69) && c.get(1) && c.get(68));
        assert_eq!(c.count_ones(), 68);
    }

    #[test]
    fn iter_ones_roundtrip() {
        let idx = [0usize, 3, 63, 64, 127, 128];
        let v = Gf2Vec::from_indices(130, idx);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), idx.to_vec());
    }
}
