use serde::{Deserialize, Serialize};

use super::{pochhammer_multi, NumericsError, Scalar};

/// Parameter vector `f` paired with positive integer shifts `m`.
///
/// Appears in the hypergeometric parameters as top `f + m` over bottom `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct ShiftedFamily {
    f: Vec<Scalar>,
    m: Vec<usize>,
    m_total: usize,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    f: Vec<Scalar>,
    m: Vec<usize>,
}

impl TryFrom<RawFamily> for ShiftedFamily {
    type Error = NumericsError;
    fn try_from(raw: RawFamily) -> Result<Self, Self::Error> {
        ShiftedFamily::new(raw.f, raw.m)
    }
}

impl From<ShiftedFamily> for RawFamily {
    fn from(fam: ShiftedFamily) -> Self {
        RawFamily { f: fam.f, m: fam.m }
    }
}

impl ShiftedFamily {
    pub fn new(f: Vec<Scalar>, m: Vec<usize>) -> Result<Self, NumericsError> {
        if f.is_empty() {
            return Err(NumericsError::InvalidFamily("empty parameter vector".into()));
        }
        if f.len() != m.len() {
            return Err(NumericsError::LengthMismatch { values: f.len(), shifts: m.len() });
        }
        if m.contains(&0) {
            return Err(NumericsError::InvalidFamily("shifts must be positive".into()));
        }
        if let Some(bad) = f.iter().find(|x| x.is_nonpositive_integer()) {
            return Err(NumericsError::InvalidFamily(format!(
                "parameter {bad} is zero or a negative integer"
            )));
        }
        let m_total = m.iter().sum();
        Ok(ShiftedFamily { f, m, m_total })
    }

    pub fn f(&self) -> &[Scalar] {
        &self.f
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn r(&self) -> usize {
        self.f.len()
    }

    pub fn m_total(&self) -> usize {
        self.m_total
    }

    pub fn is_exact(&self) -> bool {
        self.f.iter().all(Scalar::is_exact)
    }

    /// Top parameters `f + m`.
    pub fn f_plus_m(&self) -> Vec<Scalar> {
        self.f.iter().zip(&self.m).map(|(fi, &mi)| fi + mi as i64).collect()
    }

    /// `f + delta`, component-wise.
    pub fn f_shifted(&self, delta: &Scalar) -> Vec<Scalar> {
        self.f.iter().map(|fi| fi + delta).collect()
    }

    /// The family `(f + delta, m)`; fails when a shifted entry is a nonpositive integer.
    pub fn shifted(&self, delta: &Scalar) -> Result<ShiftedFamily, NumericsError> {
        ShiftedFamily::new(self.f_shifted(delta), self.m.clone())
    }

    /// `(f)_m`.
    pub fn poch_f(&self) -> Scalar {
        self.poch_of(&self.f)
    }

    /// `(v_1)_{m_1} ... (v_r)_{m_r}` for an arbitrary vector of length r.
    pub fn poch_of(&self, v: &[Scalar]) -> Scalar {
        pochhammer_multi(v, &self.m).expect("vector length matches the family")
    }

    /// `(f + delta)_m`.
    pub fn poch_shifted(&self, delta: &Scalar) -> Scalar {
        self.poch_of(&self.f_shifted(delta))
    }

    /// `(f + m)_1 / (f)_1 = prod (f_i + m_i) / prod f_i`.
    pub fn unit_ratio(&self) -> Scalar {
        let top: Scalar = self.f_plus_m().into_iter().product();
        let bottom: Scalar = self.f.iter().cloned().product();
        &top / &bottom
    }

    /// A permutation of the (f_i, m_i) pairs.
    pub fn permuted(&self, order: &[usize]) -> ShiftedFamily {
        ShiftedFamily {
            f: order.iter().map(|&i| self.f[i].clone()).collect(),
            m: order.iter().map(|&i| self.m[i]).collect(),
            m_total: self.m_total,
        }
    }

    pub fn describe(&self) -> String {
        let f: Vec<String> = self.f.iter().map(|x| x.render(20)).collect();
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        format!("f=({}), m=({})", f.join(", "), m.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_shape() {
        assert!(ShiftedFamily::new(vec![], vec![]).is_err());
        assert!(ShiftedFamily::new(vec![Scalar::int(2)], vec![1, 2]).is_err());
        assert!(ShiftedFamily::new(vec![Scalar::int(2)], vec![0]).is_err());
        assert!(ShiftedFamily::new(vec![Scalar::int(-1)], vec![1]).is_err());
        assert!(ShiftedFamily::new(vec![Scalar::int(0)], vec![1]).is_err());
        let fam = ShiftedFamily::new(vec![Scalar::ratio(21, 5), Scalar::ratio(-5, 3)], vec![7, 8]).unwrap();
        assert_eq!(fam.m_total(), 15);
        assert_eq!(fam.r(), 2);
    }

    #[test]
    fn derived_vectors() {
        let fam = ShiftedFamily::new(vec![Scalar::int(2), Scalar::ratio(1, 2)], vec![1, 2]).unwrap();
        assert_eq!(fam.f_plus_m(), vec![Scalar::int(3), Scalar::ratio(5, 2)]);
        // (2)_1 (1/2)_2 = 2 * 1/2 * 3/2
        assert_eq!(fam.poch_f(), Scalar::ratio(3, 2));
        assert_eq!(fam.unit_ratio(), Scalar::int(15 / 2) + Scalar::ratio(1, 2));
    }

    #[test]
    fn serde_round_trip() {
        let fam = ShiftedFamily::new(vec![Scalar::ratio(21, 5)], vec![7]).unwrap();
        let s = serde_json::to_string(&fam).unwrap();
        assert_eq!(s, r#"{"f":["21/5"],"m":[7]}"#);
        let back: ShiftedFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fam);
        assert!(serde_json::from_str::<ShiftedFamily>(r#"{"f":["-2"],"m":[1]}"#).is_err());
    }
}
