//! Numeric q-expansions of eta quotients.
//!
//! An eta quotient f = prod eta(delta z)^{r_delta} expands as
//! q^{s/24} prod (q^delta; q^delta)_inf^{r_delta} with s = sum delta r_delta.
//! The fractional power of q is kept symbolically as `prefactor24` (= s, the
//! exponent times 24) so the series part stays an honest power series in
//! integer powers of q; callers shifting coefficients must consult it.

use super::{eta_power_series, FpSeries, SeriesError};
use crate::etaq::EtaQuotient;

/// An eta quotient's expansion: a q-power prefactor and the series factor.
#[derive(Debug, Clone)]
pub struct QExpansion {
    /// 24 times the leading exponent of q, i.e. sum of delta * r_delta.
    pub prefactor24: i64,
    /// prod (q^delta; q^delta)_inf^{r_delta} mod m, truncated.
    pub series: FpSeries,
}

impl QExpansion {
    /// The leading q-exponent when it is integral.
    pub fn leading_exponent(&self) -> Option<i64> {
        (self.prefactor24 % 24 == 0).then_some(self.prefactor24 / 24)
    }
}

/// Expand an eta quotient mod m to `len` coefficients.
pub fn eta_quotient_expansion(
    quotient: &EtaQuotient,
    modulus: u64,
    len: usize,
) -> Result<QExpansion, SeriesError> {
    let mut series = FpSeries::one(modulus, len)?;
    let mut prefactor24 = 0i64;
    for &(delta, r) in quotient.terms() {
        prefactor24 += delta as i64 * r;
        series = series.mul(&eta_power_series(delta, r, modulus, len)?)?;
    }
    Ok(QExpansion {
        prefactor24,
        series,
    })
}
