//! Exact elementary number theory: factorization, Kronecker symbol,
//! linear congruences and quadratic residue tests.
//!
//! Everything here is a pure function over machine integers; in-range
//! inputs for the rest of the crate are tiny, but factorization still
//! carries a deterministic Miller-Rabin certifier and a Pollard rho
//! stage so the library never silently misfactors.

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn recompose(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // this witness set is deterministic for all n < 2^64
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd((x as i64 - y as i64).abs(), n as i64) as u64;
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Factorize n >= 1. Trial division up to 10^6, then Pollard rho with a
/// Miller-Rabin certifier for any stubborn cofactor.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let value = n;
    let mut n = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= 1_000_000 && d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut extra: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            extra.push(m);
        } else {
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    extra.sort_unstable();
    let mut i = 0;
    while i < extra.len() {
        let p = extra[i];
        let mut e = 0;
        while i < extra.len() && extra[i] == p {
            e += 1;
            i += 1;
        }
        factors.push((p, e));
    }
    factors.sort_unstable();
    debug_assert_eq!(
        factors.iter().map(|&(p, e)| p.pow(e)).product::<u64>(),
        value
    );
    Factorization { value, factors }
}

/// Kronecker symbol (a/n), the completely multiplicative extension of the
/// Jacobi symbol. (a/0) is 1 for a = +-1 and 0 otherwise; (a/2) is 0 for
/// even a, +1 for a = +-1 mod 8 and -1 for a = +-3 mod 8.
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut res = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            res = -res;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        if a.rem_euclid(8) == 3 || a.rem_euclid(8) == 5 {
            res = -res;
        }
    }
    // n is now odd and positive: Jacobi with reciprocity
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// Smallest non-negative solution of a*x = b (mod m), together with the
/// modulus of the solution set. Absence of a solution is a value, not an
/// error, so formula code can branch on it directly.
pub fn solve_linear_congruence(a: i64, b: i64, m: i64) -> Option<(i64, i64)> {
    assert!(m >= 1, "modulus must be positive");
    let (g, x, _) = extended_gcd(a.rem_euclid(m), m);
    if g == 0 {
        // a = 0 mod m: solvable iff b = 0 mod m
        return if b.rem_euclid(m) == 0 {
            Some((0, 1))
        } else {
            None
        };
    }
    if b.rem_euclid(g) != 0 {
        return None;
    }
    let modulus = m / g;
    let x0 = ((b / g) as i128 * x as i128).rem_euclid(modulus as i128) as i64;
    Some((x0, modulus))
}

/// Does x^2 = -q (mod p^k) have a solution? General prime-power test.
fn sqrt_mod_prime_power(neg_q: i64, p: u64, k: u32) -> bool {
    let pk = p.pow(k) as i64;
    let a = neg_q.rem_euclid(pk);
    if a == 0 {
        return true;
    }
    // a = p^e * u with p not dividing u
    let mut e = 0u32;
    let mut u = a;
    while u % p as i64 == 0 {
        u /= p as i64;
        e += 1;
    }
    if e % 2 != 0 {
        return false;
    }
    let rem = k - e;
    if p == 2 {
        match rem {
            0 => true,
            1 => true,
            2 => u.rem_euclid(4) == 1,
            _ => u.rem_euclid(8) == 1,
        }
    } else {
        kronecker(u, p as i64) == 1
    }
}

/// True iff x^2 = -q (mod n) is solvable, decided prime power by prime
/// power from the factorization of n.
pub fn sqrt_neg_mod(n: u64, q: u64) -> bool {
    assert!(n >= 1 && q >= 1);
    factorize(n)
        .factors
        .iter()
        .all(|&(p, k)| sqrt_mod_prime_power(-(q as i64), p, k))
}

/// Euler's totient, from the factorization.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(0, 1), 1);
        // -7 = 1 mod 8 under the (a/2) rule
        assert_eq!(kronecker(-7, 2), 1);
    }

    #[test]
    fn phi_by_direct_count() {
        for n in 1..300u64 {
            let direct = (1..=n).filter(|&k| gcd(k as i64, n as i64) == 1).count() as u64;
            assert_eq!(euler_phi(n), direct, "n={n}");
        }
    }

    #[test]
    fn kronecker_agrees_with_euler_criterion() {
        for p in (3..200u64).filter(|&p| is_prime(p)) {
            for a in -(p as i64)..(2 * p as i64) {
                let euler = pow_mod(
                    a.rem_euclid(p as i64) as u64,
                    (p - 1) / 2,
                    p,
                );
                let legendre = if euler == 0 {
                    0
                } else if euler == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p as i64), legendre, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                for n in 1i64..40 {
                    assert_eq!(
                        kronecker(a * b, n),
                        kronecker(a, n) * kronecker(b, n)
                    );
                }
            }
        }
        for a in -30i64..30 {
            for m in 1i64..30 {
                for n in 1i64..30 {
                    assert_eq!(
                        kronecker(a, m * n),
                        kronecker(a, m) * kronecker(a, n)
                    );
                }
            }
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).factors, Vec::<(u64, u32)>::new());
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(253).factors, vec![(11, 1), (23, 1)]);
    }

    #[test]
    fn factorize_round_trips() {
        for n in 1..=100_000u64 {
            let f = factorize(n);
            assert_eq!(f.recompose(), n);
            for &(p, _) in &f.factors {
                assert!(is_prime(p));
            }
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn factorize_large() {
        let f = factorize(1_000_003 * 1_000_033);
        assert_eq!(f.factors, vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(solve_linear_congruence(2, 0, 44), Some((0, 22)));
        assert_eq!(solve_linear_congruence(4, 2, 6), Some((2, 3)));
        assert_eq!(solve_linear_congruence(2, 1, 4), None);
    }

    #[test]
    fn congruence_agrees_with_exhaustive_search() {
        for m in 1i64..=60 {
            for a in -8i64..=8 {
                for b in -8i64..=8 {
                    let brute: Vec<i64> = (0..m)
                        .filter(|&x| (a * x - b).rem_euclid(m) == 0)
                        .collect();
                    match solve_linear_congruence(a, b, m) {
                        None => assert!(brute.is_empty(), "a={a} b={b} m={m}"),
                        Some((x0, md)) => {
                            assert_eq!(
                                brute.first().copied(),
                                Some(x0),
                                "a={a} b={b} m={m}"
                            );
                            let expect: Vec<i64> =
                                (0..m).filter(|x| (x - x0).rem_euclid(md) == 0).collect();
                            assert_eq!(brute, expect, "a={a} b={b} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sqrt_neg_mod_examples() {
        assert!(sqrt_neg_mod(14, 7));
        assert!(sqrt_neg_mod(15, 5));
        assert!(sqrt_neg_mod(1, 3));
    }

    #[test]
    fn sqrt_neg_mod_agrees_with_residue_scan() {
        for n in 1u64..=500 {
            for q in 1u64..=60 {
                let brute = (0..n).any(|x| (x * x + q) % n == 0);
                assert_eq!(sqrt_neg_mod(n, q), brute, "n={n} q={q}");
            }
        }
    }
}
