//! The density infimum (cot(1/4) - 3)/8 and the non-vanishing proportion
//! (19 - cot(1/4))/16, kept as exact linear forms in cot(1/4).

use num_rational::Ratio;
use serde::Serialize;

/// α + β·cot(1/4) with rational α, β.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CotForm {
    #[serde(serialize_with = "ser_ratio")]
    pub constant: Ratio<i64>,
    #[serde(serialize_with = "ser_ratio")]
    pub cot_coeff: Ratio<i64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl CotForm {
    pub fn value(&self) -> f64 {
        ratio_f64(self.constant) + ratio_f64(self.cot_coeff) * cot_quarter()
    }

    /// 1 - self/2.
    pub fn one_minus_half(&self) -> CotForm {
        let half = Ratio::new(1, 2);
        CotForm { constant: Ratio::from_integer(1) - self.constant * half, cot_coeff: -self.cot_coeff * half }
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn cot_quarter() -> f64 {
    0.25f64.cos() / 0.25f64.sin()
}

#[derive(Debug, Clone, Serialize)]
pub struct NonvanishingConstants {
    pub inf_density: f64,
    pub nonvanishing_lower: f64,
    pub inf_form: CotForm,
    pub lower_form: CotForm,
    /// 1 - inf/2 = lower, compared as exact forms.
    pub relation_holds: bool,
}

pub fn nonvanishing_constants() -> NonvanishingConstants {
    let inf_form = CotForm { constant: Ratio::new(-3, 8), cot_coeff: Ratio::new(1, 8) };
    let lower_form = CotForm { constant: Ratio::new(19, 16), cot_coeff: Ratio::new(-1, 16) };
    NonvanishingConstants {
        inf_density: inf_form.value(),
        nonvanishing_lower: lower_form.value(),
        inf_form,
        lower_form,
        relation_holds: inf_form.one_minus_half() == lower_form,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let c = nonvanishing_constants();
        // 94.27...%
        assert_eq!(format!("{:.4}", c.nonvanishing_lower), "0.9427");
        assert!((c.nonvanishing_lower - 0.94273016470963).abs() < 1e-13);
        assert!((c.inf_density - 0.11454).abs() < 1e-5);
        assert!(c.relation_holds);
        assert!((1.0 - c.inf_density / 2.0 - c.nonvanishing_lower).abs() < 1e-15);
    }
}
