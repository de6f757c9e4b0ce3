//! Fixed-length bitsets with the two shift-or kernels the sieves need.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn or_assign(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    fn clear_tail(&mut self) {
        let r = self.len & 63;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    /// `self |= src << k`, truncated at `len`.
    pub fn or_shifted(&mut self, src: &Bits, k: usize) {
        debug_assert_eq!(self.len, src.len);
        if k >= self.len {
            return;
        }
        let (ws, bs) = (k >> 6, (k & 63) as u32);
        let n = self.words.len();
        if bs == 0 {
            for i in (ws..n).rev() {
                self.words[i] |= src.words[i - ws];
            }
        } else {
            for i in (ws..n).rev() {
                let lo = src.words[i - ws] << bs;
                let hi = if i > ws { src.words[i - ws - 1] >> (64 - bs) } else { 0 };
                self.words[i] |= lo | hi;
            }
        }
        self.clear_tail();
    }

    /// `self |= src >> k`.
    pub fn or_shifted_down(&mut self, src: &Bits, k: usize) {
        debug_assert_eq!(self.len, src.len);
        if k >= self.len {
            return;
        }
        let (ws, bs) = (k >> 6, (k & 63) as u32);
        let n = self.words.len();
        for i in 0..n - ws {
            let lo = src.words[i + ws] >> bs;
            let hi = if bs != 0 && i + ws + 1 < n { src.words[i + ws + 1] << (64 - bs) } else { 0 };
            self.words[i] |= lo | hi;
        }
    }

    /// `self |= rotate(src, k)` where bit `i` of `src` lands on `(i + k) % len`.
    pub fn or_rotated(&mut self, src: &Bits, k: usize) {
        let k = k % self.len.max(1);
        if k == 0 {
            self.or_assign(src);
            return;
        }
        self.or_shifted(src, k);
        self.or_shifted_down(src, self.len - k);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_or_truncates() {
        let mut a = Bits::new(130);
        let mut s = Bits::new(130);
        for i in [0, 5, 63, 64, 100, 129] {
            s.set(i);
        }
        a.or_shifted(&s, 65);
        let got: Vec<usize> = a.iter_ones().collect();
        assert_eq!(got, vec![65, 70, 128, 129]);
    }

    #[test]
    fn rotation_wraps() {
        let mut a = Bits::new(10);
        let mut s = Bits::new(10);
        s.set(8);
        s.set(1);
        a.or_rotated(&s, 4);
        assert_eq!(a.iter_ones().collect::<Vec<_>>(), vec![2, 5]);
    }
}
