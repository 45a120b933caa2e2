use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rat::Rat;

use super::laurent::LaurentPoly;

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// Reduction of a rational modulo the prime `q`.
pub(crate) fn reduce(c: &Rat, q: u64) -> Result<u64> {
    let qb = BigInt::from(q);
    let den = c.denom().mod_floor(&qb).to_u64().expect("residue fits");
    if den == 0 {
        return Err(Error::BadReduction { q });
    }
    let num = c.numer().mod_floor(&qb).to_u64().expect("residue fits");
    Ok(num * pow_mod(den, q - 2, q) % q)
}

fn check_prime(q: u64) -> Result<()> {
    if is_prime(q) && q < (1 << 31) {
        Ok(())
    } else {
        Err(Error::NotPrime(q))
    }
}

/// `h` reduced mod `q` as (coefficient, exponents) pairs. On the torus the
/// exponents are taken mod `q - 1`, so negative ones are allowed.
fn reduced_terms(h: &LaurentPoly, q: u64, on_torus: bool) -> Result<Vec<(u64, Vec<u64>)>> {
    let mut out = Vec::new();
    for (e, c) in h.terms() {
        let c = reduce(c, q)?;
        if c == 0 {
            continue;
        }
        let e = e
            .iter()
            .map(|k| {
                if on_torus {
                    Ok(k.rem_euclid(q as i64 - 1) as u64)
                } else {
                    u64::try_from(*k).map_err(|_| Error::Invalid(format!("negative exponent in {h}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((c, e));
    }
    Ok(out)
}

fn count_points(terms: &[(u64, Vec<u64>)], n: usize, q: u64, start: u64, target: u64) -> u64 {
    if n == 0 {
        let v = terms.iter().fold(0, |s, (c, _)| (s + c) % q);
        return u64::from(v == target);
    }
    let eval = |x: &[u64]| {
        terms.iter().fold(0u64, |s, (c, e)| {
            let t = e.iter().zip(x).fold(*c, |acc, (k, xi)| acc * pow_mod(*xi, *k, q) % q);
            (s + t) % q
        })
    };
    (start..q)
        .into_par_iter()
        .map(|x0| {
            let mut x = vec![start; n];
            x[0] = x0;
            let mut count = 0u64;
            loop {
                if eval(&x) == target {
                    count += 1;
                }
                let mut i = 1;
                loop {
                    if i == n {
                        return count;
                    }
                    x[i] += 1;
                    if x[i] < q {
                        break;
                    }
                    x[i] = start;
                    i += 1;
                }
            }
        })
        .sum()
}

/// Number of zeros of `h` in `(𝔽_q^×)ⁿ`.
pub fn count_hypersurface_ff(h: &LaurentPoly, q: u64) -> Result<u64> {
    check_prime(q)?;
    let terms = reduced_terms(h, q, true)?;
    Ok(count_points(&terms, h.nvars(), q, 1, 0))
}

/// Number of points of `𝔽_qⁿ` where the polynomial `f` takes the value `value`.
pub fn count_affine_ff(f: &LaurentPoly, value: &Rat, q: u64) -> Result<u64> {
    check_prime(q)?;
    let terms = reduced_terms(f, q, false)?;
    let target = if value.is_zero() { 0 } else { reduce(value, q)? };
    Ok(count_points(&terms, f.nvars(), q, 0, target))
}

/// A point of `(𝔽_q^×)ⁿ` where `h` and every `x_i ∂h/∂x_i` vanish, if any.
pub fn torus_singular_point(h: &LaurentPoly, q: u64) -> Result<Option<Vec<u64>>> {
    check_prime(q)?;
    let n = h.nvars();
    let mut terms = Vec::new();
    for (e, c) in h.terms() {
        let c = reduce(c, q)?;
        if c == 0 {
            continue;
        }
        let te: Vec<u64> = e.iter().map(|k| k.rem_euclid(q as i64 - 1) as u64).collect();
        let me: Vec<u64> = e.iter().map(|k| k.rem_euclid(q as i64) as u64).collect();
        terms.push((c, te, me));
    }
    if terms.is_empty() {
        return Ok(Some(vec![1; n]));
    }
    let total = (q - 1).checked_pow(n as u32).ok_or_else(|| Error::Invalid("search space too large".into()))?;
    let found = (0..total).into_par_iter().find_first(|idx| {
        let mut k = *idx;
        let x: Vec<u64> = (0..n)
            .map(|_| {
                let v = k % (q - 1) + 1;
                k /= q - 1;
                v
            })
            .collect();
        let mut vals = vec![0u64; n + 1];
        for (c, te, me) in &terms {
            let t = te.iter().zip(&x).fold(*c, |acc, (k, xi)| acc * pow_mod(*xi, *k, q) % q);
            vals[0] = (vals[0] + t) % q;
            for i in 0..n {
                vals[i + 1] = (vals[i + 1] + t * me[i]) % q;
            }
        }
        vals.iter().all(|v| *v == 0)
    });
    Ok(found.map(|mut k| {
        (0..n)
            .map(|_| {
                let v = k % (q - 1) + 1;
                k /= q - 1;
                v
            })
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    fn p(n: usize, s: &str) -> LaurentPoly {
        LaurentPoly::parse(n, s).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_hypersurface_ff(&p(1, "x - 1"), 7).unwrap(), 1);
        assert_eq!(count_hypersurface_ff(&p(2, "x + y + 1"), 5).unwrap(), 3);
        assert_eq!(count_hypersurface_ff(&p(2, "x + y"), 5).unwrap(), 4);
        assert_eq!(count_hypersurface_ff(&p(1, "x^-1 - 2"), 5).unwrap(), 1);
        assert_eq!(count_affine_ff(&p(2, "x^2 + y^2"), &int(1), 5).unwrap(), 4);
        assert_eq!(count_affine_ff(&p(2, "x*y"), &int(0), 3).unwrap(), 5);
        assert_eq!(count_hypersurface_ff(&p(1, "1/5*x + 1"), 5), Err(Error::BadReduction { q: 5 }));
        assert_eq!(count_hypersurface_ff(&p(1, "x"), 6), Err(Error::NotPrime(6)));
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(9));
    }
}
