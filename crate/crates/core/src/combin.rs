//! Small combinatorial helpers.

/// Binomial coefficient as `f64`; zero when `k > n`.
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round_if_small()
}

/// Exact binomial coefficient.
pub fn binom_u(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Multinomial coefficient N!/Π nᵢ!.
pub fn multinomial(counts: &[usize]) -> f64 {
    let mut total = 0;
    let mut acc = 1.0;
    for &c in counts {
        for i in 1..=c {
            total += 1;
            acc = acc * total as f64 / i as f64;
        }
    }
    acc
}

/// Dimension d[N] = C(N+d−1, N) of the symmetric subspace.
pub fn sym_dim(d: usize, n: usize) -> usize {
    binom_u(n + d - 1, n)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|i| i * i <= n).all(|i| n % i != 0)
}

/// All length-`d` occupation vectors summing to `n`, first entry descending.
pub fn compositions(d: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if d == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=n).rev() {
            prefix.push(k);
            rec(d - 1, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, n, &mut Vec::with_capacity(d), &mut out);
    out
}

trait RoundSmall {
    fn round_if_small(self) -> Self;
}

impl RoundSmall for f64 {
    fn round_if_small(self) -> f64 {
        if self < 9.0e15 {
            self.round()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom_u(5, 2), 10);
        assert_eq!(binom(6, 3), 20.0);
        assert_eq!(binom(2, 3), 0.0);
        assert_eq!(sym_dim(2, 3), 4);
        assert_eq!(sym_dim(3, 2), 6);
    }

    #[test]
    fn multinomial_matches_factorials() {
        assert_eq!(multinomial(&[2, 1, 1]), 12.0);
        assert_eq!(multinomial(&[3, 0]), 1.0);
    }

    #[test]
    fn compositions_order_and_count() {
        let c = compositions(2, 2);
        assert_eq!(c, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(3, 4).len(), sym_dim(3, 4));
    }

    #[test]
    fn primes() {
        let p: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(p, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
