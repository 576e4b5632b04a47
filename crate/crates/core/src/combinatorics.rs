//! Stirling numbers, the sigma expansion of a shifted family, the
//! coefficients C_{k,r}, and Nørlund's coefficients g_n.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{factorial, pochhammer, Scalar, ShiftedFamily};

/// Stirling number of the second kind S(j, k).
pub fn stirling2(j: usize, k: usize) -> BigInt {
    if k > j {
        return BigInt::from(0);
    }
    stirling2_row(j).swap_remove(k)
}

/// Row `S(j, 0..=j)` by the triangular recurrence.
pub fn stirling2_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for n in 1..=j {
        let mut next = vec![BigInt::from(0); n + 1];
        for k in 1..=n {
            let keep = if k < n { &row[k] * k } else { BigInt::from(0) };
            next[k] = keep + &row[k - 1];
        }
        row = next;
    }
    row
}

/// Coefficients of `(f_1+x)_{m_1} ... (f_r+x)_{m_r} = sum_j sigma_j x^j`.
#[derive(Clone, Debug)]
pub struct SigmaTable {
    pub family: ShiftedFamily,
    pub sigma: Vec<Scalar>,
}

impl SigmaTable {
    /// Evaluates the generating polynomial at `x`.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.sigma.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }
}

pub fn sigma_coeffs(family: &ShiftedFamily) -> SigmaTable {
    let mut poly = vec![Scalar::one()];
    for (fi, &mi) in family.f().iter().zip(family.m()) {
        for j in 0..mi {
            poly = mul_linear(&poly, &(fi + j as i64));
        }
    }
    SigmaTable { family: family.clone(), sigma: poly }
}

/// `p(x) * (c + x)` on ascending coefficients.
pub(crate) fn mul_linear(p: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); p.len() + 1];
    for (i, a) in p.iter().enumerate() {
        out[i] = &out[i] + &(a * c);
        out[i + 1] = &out[i + 1] + a;
    }
    out
}

/// `F(-k, f+m; f; 1)` as an explicit finite sum.
///
/// Uses `(f+m)_n / (f)_n = (f+n)_m / (f)_m`, so the sum is a k-th finite
/// difference of the sigma polynomial; it vanishes for `k > m`.
pub fn terminating_unit(family: &ShiftedFamily, k: usize) -> Scalar {
    let table = sigma_coeffs(family);
    let mut sum = Scalar::zero();
    let mut binom = BigInt::from(1);
    for n in 0..=k {
        let term = Scalar::from_bigint(binom.clone()) * table.eval(&Scalar::int(n as i64));
        sum = if n % 2 == 0 { sum + term } else { sum - term };
        binom = binom * (k - n) / (n + 1);
    }
    let poch = family.poch_f();
    &sum / &poch
}

/// `C_{k,r} = (1/(f)_m) sum_{j>=k} sigma_j S(j,k)`.
pub fn c_coeff(family: &ShiftedFamily, k: usize) -> Result<Scalar> {
    let m = family.m_total();
    if k > m {
        return Err(Error::OutOfRange { index: k, max: m });
    }
    let table = sigma_coeffs(family);
    let mut sum = Scalar::zero();
    for j in k..=m {
        sum = sum + &table.sigma[j] * &Scalar::from_bigint(stirling2(j, k));
    }
    Ok(&sum / &family.poch_f())
}

/// `C_{k,r} = ((-1)^k / k!) F(-k, f+m; f)`, the cross-check form.
pub fn c_coeff_series(family: &ShiftedFamily, k: usize) -> Result<Scalar> {
    let m = family.m_total();
    if k > m {
        return Err(Error::OutOfRange { index: k, max: m });
    }
    let v = &terminating_unit(family, k) / &factorial(k);
    Ok(if k.is_multiple_of(2) { v } else { -v })
}

/// Top vector `a` (length q-1) and bottom vector `b` (length q) of a Nørlund expansion.
#[derive(Clone, Debug)]
pub struct NorlundContext {
    a_vec: Vec<Scalar>,
    b_vec: Vec<Scalar>,
    /// `psi[l-1] = sum_{i<=l} (b_i - a_i)` for `l = 1..q-1`.
    psi: Vec<Scalar>,
    nu: Scalar,
}

impl NorlundContext {
    pub fn new(a_vec: Vec<Scalar>, b_vec: Vec<Scalar>) -> Result<Self> {
        if b_vec.is_empty() || a_vec.len() + 1 != b_vec.len() {
            return Err(Error::DimensionMismatch(format!(
                "need q-1 top and q bottom parameters, got {} and {}",
                a_vec.len(),
                b_vec.len()
            )));
        }
        let mut psi = Vec::with_capacity(a_vec.len());
        let mut acc = Scalar::zero();
        for (a, b) in a_vec.iter().zip(&b_vec) {
            acc = acc + (b - a);
            psi.push(acc.clone());
        }
        let nu = b_vec.iter().cloned().sum::<Scalar>() - a_vec.iter().cloned().sum::<Scalar>();
        Ok(NorlundContext { a_vec, b_vec, psi, nu })
    }

    pub fn a_vec(&self) -> &[Scalar] {
        &self.a_vec
    }

    pub fn b_vec(&self) -> &[Scalar] {
        &self.b_vec
    }

    pub fn psi(&self) -> &[Scalar] {
        &self.psi
    }

    pub fn nu(&self) -> &Scalar {
        &self.nu
    }

    pub fn q(&self) -> usize {
        self.b_vec.len()
    }

    /// `b_{l+1} - a_l` for 1-based `l`.
    fn gap(&self, l: usize) -> Scalar {
        &self.b_vec[l] - &self.a_vec[l - 1]
    }

    /// All of `g_0 .. g_n`.
    ///
    /// The nested sum over chains `0 <= j_1 <= ... <= j_{q-2} <= n` is evaluated
    /// one link at a time: `d[j]` holds the sum over chain prefixes ending at `j`.
    pub fn g_upto(&self, n: usize) -> Vec<Scalar> {
        let mut d = vec![Scalar::zero(); n + 1];
        d[0] = Scalar::one();
        for l in 1..self.q() {
            let psi = &self.psi[l - 1];
            let gap = self.gap(l);
            let mut next = vec![Scalar::zero(); n + 1];
            for (i, di) in d.iter().enumerate() {
                if di.is_exact_zero() {
                    continue;
                }
                let start = psi + i as i64;
                // weight(s) = (psi + i)_s (gap)_s / s!, built incrementally.
                let mut w = Scalar::one();
                for s in 0..=(n - i) {
                    if s > 0 {
                        let step = (&start + (s - 1) as i64) * (&gap + (s - 1) as i64);
                        w = &(w * step) / &Scalar::int(s as i64);
                    }
                    next[i + s] = &next[i + s] + &(di * &w);
                }
            }
            d = next;
        }
        d
    }

    pub fn g(&self, n: usize) -> Scalar {
        self.g_upto(n).swap_remove(n)
    }

    /// Closed form of `g_1`.
    pub fn g1_closed(&self) -> Scalar {
        (1..self.q()).map(|l| self.gap(l) * &self.psi[l - 1]).sum()
    }

    /// Closed form of `g_2`.
    pub fn g2_closed(&self) -> Scalar {
        let q = self.q();
        let first: Scalar =
            (1..q).map(|l| pochhammer(&self.gap(l), 2) * pochhammer(&self.psi[l - 1], 2)).sum();
        let second: Scalar = (2..q)
            .map(|k| {
                let inner: Scalar = (1..k).map(|l| self.gap(l) * &self.psi[l - 1]).sum();
                self.gap(k) * (&self.psi[k - 1] + 1) * inner
            })
            .sum();
        &first / &Scalar::int(2) + second
    }
}

pub fn norlund_g(ctx: &NorlundContext, n: usize) -> Scalar {
    ctx.g(n)
}

/// The Nørlund context of the Minton extension: top `b - f`, bottom `(b - f - m, b + k)`.
pub fn minton_context(b: &Scalar, k: usize, family: &ShiftedFamily) -> NorlundContext {
    let alpha: Vec<Scalar> = family.f().iter().map(|fi| b - fi).collect();
    let mut beta: Vec<Scalar> = family.f_plus_m().iter().map(|fm| b - fm).collect();
    beta.push(b + k as i64);
    NorlundContext::new(alpha, beta).expect("r top and r+1 bottom parameters")
}

/// `q_k = sum_{i=0}^{m-k-1} g_{m-k-i-1}(alpha; beta) (b-i)_i`.
pub fn q_k_sum(b: &Scalar, k: usize, family: &ShiftedFamily) -> Result<Scalar> {
    let m = family.m_total();
    if k >= m {
        return Err(Error::OutOfRange { index: k, max: m.saturating_sub(1) });
    }
    let top = m - k - 1;
    let g = minton_context(b, k, family).g_upto(top);
    Ok((0..=top).map(|i| &g[top - i] * &pochhammer(&(b - i as i64), i)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(f: &[(i64, i64)], m: &[usize]) -> ShiftedFamily {
        ShiftedFamily::new(f.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect(), m.to_vec()).unwrap()
    }

    /// Nested sum by explicit recursion over monotone chains.
    fn g_bruteforce(ctx: &NorlundContext, n: usize) -> Scalar {
        fn rec(ctx: &NorlundContext, l: usize, prev: usize, n: usize) -> Scalar {
            let q = ctx.q();
            let last = l == q - 1;
            let range: Vec<usize> = if last { vec![n] } else { (prev..=n).collect() };
            let mut total = Scalar::zero();
            for j in range {
                let s = j - prev;
                let gap = &ctx.b_vec[l] - &ctx.a_vec[l - 1];
                let w =
                    &(pochhammer(&(&ctx.psi[l - 1] + prev as i64), s) * pochhammer(&gap, s)) / &factorial(s);
                let rest = if last { Scalar::one() } else { rec(ctx, l + 1, j, n) };
                total = total + w * rest;
            }
            total
        }
        if ctx.q() == 1 {
            return if n == 0 { Scalar::one() } else { Scalar::zero() };
        }
        rec(ctx, 1, 0, n)
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), BigInt::from(1));
        assert_eq!(stirling2(3, 2), BigInt::from(3));
        assert_eq!(stirling2(4, 5), BigInt::from(0));
        assert_eq!(stirling2(5, 0), BigInt::from(0));
        assert_eq!(stirling2(10, 4), BigInt::from(34105));
    }

    #[test]
    fn stirling_rows_sum_to_bell_numbers() {
        // Bell numbers from the Bell triangle, independent of the Stirling recurrence.
        let mut bell = vec![BigInt::from(1)];
        let mut row = vec![BigInt::from(1)];
        for _ in 0..10 {
            let mut next = vec![row.last().unwrap().clone()];
            for x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            bell.push(next[0].clone());
            row = next;
        }
        for (j, b) in bell.iter().enumerate() {
            let s: BigInt = stirling2_row(j).iter().sum();
            assert_eq!(&s, b, "row {j}");
        }
    }

    #[test]
    fn sigma_examples() {
        let t = sigma_coeffs(&fam(&[(2, 1)], &[2]));
        assert_eq!(t.sigma, vec![Scalar::int(6), Scalar::int(5), Scalar::int(1)]);
        let t = sigma_coeffs(&fam(&[(2, 1)], &[1]));
        assert_eq!(t.sigma, vec![Scalar::int(2), Scalar::int(1)]);
        let f = fam(&[(21, 5), (-5, 3)], &[7, 8]);
        let t = sigma_coeffs(&f);
        assert_eq!(t.sigma[15], Scalar::one());
        assert_eq!(t.sigma[0], f.poch_f());
    }

    #[test]
    fn c_coeff_examples() {
        let f = fam(&[(2, 1)], &[1]);
        assert_eq!(c_coeff(&f, 0).unwrap(), Scalar::one());
        assert_eq!(c_coeff(&f, 1).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(c_coeff_series(&f, 1).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(terminating_unit(&f, 1), Scalar::ratio(-1, 2));
        let g = fam(&[(7, 3), (1, 2)], &[2, 3]);
        assert_eq!(c_coeff(&g, 5).unwrap(), &Scalar::one() / &g.poch_f());
        assert!(c_coeff(&g, 6).is_err());
    }

    #[test]
    fn terminating_unit_matches_direct_sum() {
        let f = fam(&[(7, 3), (1, 2)], &[2, 1]);
        for k in 0..6usize {
            let mut direct = Scalar::zero();
            for n in 0..=k {
                let mut t = pochhammer(&Scalar::int(-(k as i64)), n);
                for (fm, fi) in f.f_plus_m().iter().zip(f.f()) {
                    t = &(t * pochhammer(fm, n)) / &pochhammer(fi, n);
                }
                direct = direct + &t / &factorial(n);
            }
            assert_eq!(terminating_unit(&f, k), direct, "k={k}");
        }
    }

    #[test]
    fn norlund_small_cases() {
        let ctx = NorlundContext::new(vec![Scalar::ratio(1, 3)], vec![Scalar::int(2), Scalar::ratio(5, 2)])
            .unwrap();
        assert_eq!(ctx.g(0), Scalar::one());
        assert_eq!(ctx.g(1), ctx.g1_closed());
        assert_eq!(ctx.g(2), ctx.g2_closed());
        assert_eq!(ctx.nu(), &(Scalar::int(2) + Scalar::ratio(5, 2) - Scalar::ratio(1, 3)));
        assert!(NorlundContext::new(vec![Scalar::one()], vec![Scalar::one()]).is_err());
        let trivial = NorlundContext::new(vec![], vec![Scalar::int(3)]).unwrap();
        assert_eq!(trivial.g_upto(2), vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
    }

    #[test]
    fn q_k_edge_values() {
        let f = fam(&[(3, 1), (1, 2)], &[2, 2]);
        let b = Scalar::ratio(2, 7);
        assert_eq!(q_k_sum(&b, 3, &f).unwrap(), Scalar::one());
        let ctx = minton_context(&b, 2, &f);
        assert_eq!(q_k_sum(&b, 2, &f).unwrap(), ctx.g1_closed() + (&b - 1));
        assert!(q_k_sum(&b, 4, &f).is_err());
    }

    fn rational() -> impl Strategy<Value = Scalar> {
        (-40i64..40, 1i64..12).prop_map(|(p, q)| Scalar::ratio(p, q))
    }

    fn family() -> impl Strategy<Value = ShiftedFamily> {
        prop::collection::vec((rational(), 1usize..=4), 1..=3).prop_filter_map("admissible f", |pairs| {
            let (f, m): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
            ShiftedFamily::new(f, m).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn c_forms_agree(fam in family()) {
            for k in 0..=fam.m_total() {
                prop_assert_eq!(c_coeff(&fam, k).unwrap(), c_coeff_series(&fam, k).unwrap());
            }
        }

        #[test]
        fn sigma_reproduces_product(fam in family(), x in rational()) {
            let t = sigma_coeffs(&fam);
            prop_assert_eq!(t.sigma.last().unwrap(), &Scalar::one());
            prop_assert_eq!(&t.sigma[0], &fam.poch_f());
            prop_assert_eq!(t.eval(&x), fam.poch_shifted(&x));
        }

        #[test]
        fn terminating_value_at_m(fam in family()) {
            let m = fam.m_total();
            let expect = &(factorial(m) * Scalar::int(if m % 2 == 0 { 1 } else { -1 })) / &fam.poch_f();
            prop_assert_eq!(terminating_unit(&fam, m), expect);
            prop_assert_eq!(terminating_unit(&fam, m + 1), Scalar::zero());
        }

        #[test]
        fn norlund_matches_closed_forms(
            a in prop::collection::vec(rational(), 1..=4),
            extra in rational(),
            bs in prop::collection::vec(rational(), 4),
        ) {
            let mut b: Vec<Scalar> = bs.into_iter().take(a.len()).collect();
            b.push(extra);
            let ctx = NorlundContext::new(a, b).unwrap();
            let g = ctx.g_upto(4);
            prop_assert_eq!(&g[0], &Scalar::one());
            prop_assert_eq!(&g[1], &ctx.g1_closed());
            prop_assert_eq!(&g[2], &ctx.g2_closed());
            for (n, gn) in g.iter().enumerate() {
                prop_assert_eq!(gn, &g_bruteforce(&ctx, n));
            }
        }

        #[test]
        fn norlund_symmetric_in_each_vector(
            a in prop::collection::vec(rational(), 3),
            b in prop::collection::vec(rational(), 4),
        ) {
            let ctx = NorlundContext::new(a.clone(), b.clone()).unwrap();
            let mut a2 = a.clone();
            a2.rotate_left(1);
            let mut b2 = b.clone();
            b2.reverse();
            let ctx2 = NorlundContext::new(a2, b2).unwrap();
            prop_assert_eq!(ctx.g_upto(3), ctx2.g_upto(3));
        }
    }
}
