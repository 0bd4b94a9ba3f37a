//! `A-hat_n` against a direct expansion of `prod_j Q(t z_j)` at integer points,
//! with `p_i = e_i(z)`. Shares nothing with the log/Newton route in the crate.

use etafold_core::series::{ahat_table, rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficients of `1 / S(t z)` in `t` up to `t^n`, where
/// `S(x) = sum_k x^k / (4^k (2k+1)!)`.
fn q_series(z: i64, n: usize) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    let mut s = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            fact *= BigInt::from((2 * k) * (2 * k + 1));
        }
        let den = BigInt::from(4).pow(k as u32) * &fact;
        s.push(BigRational::new(BigInt::from(z).pow(k as u32), den));
    }
    // naive long division, s[0] = 1
    let mut q = vec![BigRational::zero(); n + 1];
    q[0] = BigRational::one();
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for j in 1..=k {
            acc += &s[j] * &q[k - j];
        }
        q[k] = -acc;
    }
    q
}

fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len() - 1;
    (0..=n)
        .map(|k| (0..=k).map(|j| &a[j] * &b[k - j]).sum())
        .collect()
}

fn elementary(z: &[i64], n: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n + 1];
    e[0] = BigInt::one();
    for &x in z {
        for i in (1..=n).rev() {
            let prev = e[i - 1].clone();
            e[i] += prev * x;
        }
    }
    e
}

#[test]
fn ahat_matches_product_expansion() {
    let n = 4;
    let table = ahat_table(n);
    let grading = table.get(0).unwrap().grading().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..40 {
        let z: Vec<i64> = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
        let mut prod = vec![BigRational::zero(); n + 1];
        prod[0] = BigRational::one();
        for &x in &z {
            prod = mul(&prod, &q_series(x, n));
        }
        let e = elementary(&z, n);
        for (i, expected) in prod.iter().enumerate() {
            let poly = table.get(i).unwrap();
            let value = poly
                .contract(4 * i as u32, |m| {
                    let mut v = BigInt::one();
                    for (idx, exp) in m.0.iter().enumerate().filter(|(_, e)| **e > 0) {
                        let name = &grading.names()[idx];
                        let pi: usize = name[1..].parse().unwrap();
                        v *= e[pi].pow(*exp);
                    }
                    Some(BigRational::from_integer(v))
                })
                .unwrap();
            assert_eq!(&value, expected, "A-hat_{i} at z = {z:?}");
        }
    }
}

#[test]
fn ahat_low_degree_closed_forms() {
    let t = ahat_table(3);
    assert_eq!(
        t.get(1).unwrap().coefficient_of("p1").unwrap(),
        rational(-1, 24)
    );
    assert_eq!(
        t.get(2).unwrap().coefficient_of("p1^2").unwrap(),
        rational(7, 5760)
    );
    assert_eq!(
        t.get(2).unwrap().coefficient_of("p2").unwrap(),
        rational(-4, 5760)
    );
    assert_eq!(
        t.get(3).unwrap().coefficient_of("p1^3").unwrap(),
        rational(-31, 967680)
    );
    assert_eq!(
        t.get(3).unwrap().coefficient_of("p1 p2").unwrap(),
        rational(44, 967680)
    );
    assert_eq!(
        t.get(3).unwrap().coefficient_of("p3").unwrap(),
        rational(-16, 967680)
    );
}
