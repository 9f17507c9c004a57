use std::sync::RwLock;

use rug::Rational;

/// `C(2k,k)/4^k`, built by the multiplicative recurrence `c_k = c_{k-1}(2k-1)/(2k)`.
pub fn central_ratio(k: u64) -> Rational {
    let mut c = Rational::from(1);
    for i in 1..=k {
        c *= Rational::from((2 * i - 1, 2 * i));
    }
    c
}

/// `H_k = sum_{i<=k} 1/i`.
pub fn harmonic(k: u64) -> Rational {
    let mut h = Rational::new();
    for i in 1..=k {
        h += Rational::from((1, i));
    }
    h
}

/// `h_k = sum_{i<=k} 1/(2i-1)`.
pub fn odd_harmonic(k: u64) -> Rational {
    let mut h = Rational::new();
    for i in 1..=k {
        h += Rational::from((1, 2 * i - 1));
    }
    h
}

#[derive(Debug, Default)]
struct Columns {
    c: Vec<Rational>,
    big_h: Vec<Rational>,
    odd_h: Vec<Rational>,
}

impl Columns {
    fn seeded() -> Self {
        Self {
            c: vec![Rational::from(1)],
            big_h: vec![Rational::new()],
            odd_h: vec![Rational::new()],
        }
    }

    fn max_index(&self) -> u64 {
        self.c.len() as u64 - 1
    }

    fn extend_to(&mut self, k_max: u64) {
        let mut k = self.max_index();
        while k < k_max {
            k += 1;
            let c = &self.c[k as usize - 1] * Rational::from((2 * k - 1, 2 * k)) ;
            let h = &self.big_h[k as usize - 1] + Rational::from((1, k)) ;
            let o = &self.odd_h[k as usize - 1] + Rational::from((1, 2 * k - 1)) ;
            self.c.push(c);
            self.big_h.push(h);
            self.odd_h.push(o);
        }
    }
}

/// Append-only cache of `c_k`, `H_k` and `h_k` for `k = 0..=K`.
///
/// Reads never observe a partially grown table; growth takes the write lock.
#[derive(Debug)]
pub struct SequenceTable {
    columns: RwLock<Columns>,
}

impl Default for SequenceTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SequenceTable {
    pub fn new() -> Self {
        Self {
            columns: RwLock::new(Columns::seeded()),
        }
    }

    pub fn with_max_index(k_max: u64) -> Self {
        let table = Self::new();
        table.ensure(k_max);
        table
    }

    /// Largest index currently stored.
    pub fn max_index(&self) -> u64 {
        self.columns.read().expect("sequence table poisoned").max_index()
    }

    pub fn ensure(&self, k_max: u64) {
        if self.max_index() >= k_max {
            return;
        }
        let mut cols = self.columns.write().expect("sequence table poisoned");
        cols.extend_to(k_max);
    }

    fn read<T>(&self, k: u64, pick: impl Fn(&Columns) -> &Vec<Rational>, f: impl Fn(&Rational) -> T) -> T {
        self.ensure(k);
        let cols = self.columns.read().expect("sequence table poisoned");
        f(&pick(&cols)[k as usize])
    }

    pub fn central(&self, k: u64) -> Rational {
        self.read(k, |c| &c.c, Rational::clone)
    }

    pub fn harmonic(&self, k: u64) -> Rational {
        self.read(k, |c| &c.big_h, Rational::clone)
    }

    pub fn odd_harmonic(&self, k: u64) -> Rational {
        self.read(k, |c| &c.odd_h, Rational::clone)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Integer;

    #[test]
    fn central_ratio_examples() {
        assert_eq!(central_ratio(0), 1);
        assert_eq!(central_ratio(1), Rational::from((1, 2)));
        assert_eq!(central_ratio(2), Rational::from((3, 8)));
    }

    #[test]
    fn central_ratio_matches_binomial() {
        for k in [3u32, 10, 57, 200] {
            let binom = Integer::from(Integer::binomial_u(2 * k, k));
            let four_k = Integer::from(Integer::u_pow_u(4, k));
            assert_eq!(central_ratio(k as u64), Rational::from((binom, four_k)));
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0), 0);
        assert_eq!(harmonic(3), Rational::from((11, 6)));
        assert_eq!(harmonic(6), Rational::from((49, 20)));
    }

    #[test]
    fn odd_harmonic_examples() {
        assert_eq!(odd_harmonic(1), 1);
        assert_eq!(odd_harmonic(2), Rational::from((4, 3)));
        assert_eq!(odd_harmonic(3), Rational::from((23, 15)));
        let via_h = harmonic(6) - harmonic(3) / Rational::from(2);
        assert_eq!(odd_harmonic(3), via_h);
    }

    #[test]
    fn table_matches_free_functions() {
        let t = SequenceTable::new();
        for k in [0u64, 1, 5, 40, 17] {
            assert_eq!(t.central(k), central_ratio(k));
            assert_eq!(t.harmonic(k), harmonic(k));
            assert_eq!(t.odd_harmonic(k), odd_harmonic(k));
        }
        assert_eq!(t.max_index(), 40);
    }

    #[test]
    fn table_is_shareable_across_threads() {
        let t = SequenceTable::new();
        std::thread::scope(|s| {
            for j in 0..4u64 {
                let t = &t;
                s.spawn(move || {
                    for k in (0..120).rev().step_by(1 + j as usize) {
                        assert_eq!(t.central(k), central_ratio(k));
                    }
                });
            }
        });
    }
}
