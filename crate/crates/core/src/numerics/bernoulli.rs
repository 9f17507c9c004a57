use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::from(1)]))
}

/// Bernoulli number `B_n` with the `B_1 = -1/2` convention.
pub fn bernoulli(n: usize) -> Rational {
    let mut b = table().lock().expect("bernoulli table poisoned");
    while b.len() <= n {
        let m = b.len();
        // sum_{j<m} C(m+1, j) B_j + (m+1) B_m = 0
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            let binom = Integer::from(Integer::binomial_u((m + 1) as u32, j as u32));
            acc += Rational::from(bj * binom);
        }
        b.push(-acc / Rational::from(m as u64 + 1));
    }
    b[n].clone()
}

/// `B_{2j} / (2j)!`.
pub fn bernoulli_over_factorial(two_j: usize) -> Rational {
    let fact = Integer::from(Integer::factorial(two_j as u32));
    bernoulli(two_j) / fact
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(bernoulli(0), 1);
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(3), 0);
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(20), Rational::from((-174611, 330)));
    }

    #[test]
    fn odd_indices_vanish() {
        for n in (3..41).step_by(2) {
            assert_eq!(bernoulli(n), 0, "B_{n}");
        }
    }
}
