//! The Gauss hypergeometric function F(1/6, 5/6; 1/2; x) on [0, 1).
//!
//! Two evaluation paths, each the other's oracle:
//!
//! * direct series with the term recurrence of ₂F₁,
//! * the closed form F(1/6, 5/6; 1/2; sin²z) = cos(2z/3)/cos z, an instance
//!   of F(a, 1−a; 1/2; sin²z) = cos((2a−1)z)/cos z (DLMF 15.4.12).
//!
//! The closed form is uniformly accurate on [0, 1) and is the production
//! path; the series is kept as an independent cross-check.

use crate::error::{Error, Result};

/// Series truncation: stop once the next term drops below 2⁻⁵³ of the
/// partial sum. Safe for this positive series, whose term ratio tends to x.
const TERM_CUTOFF: f64 = 1.0 / 9007199254740992.0; // 2^-53

/// Term cap for the series; only approachable for x pathologically close to 1.
const MAX_TERMS: usize = 1_000_000;

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Closed,
}

/// One evaluation of F(1/6, 5/6; 1/2; x).
///
/// `value` is ≥ 1 and finite on [0, 1); `terms_used` is set by the series
/// path only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperResult {
    pub value: f64,
    pub terms_used: Option<usize>,
    pub method: Method,
}

fn check_domain(x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: x,
            domain: "[0, 1)",
        })
    }
}

/// Direct series: Σ aₙ with a₀ = 1 and
/// aₙ₊₁ = aₙ · ((n + 1/6)(n + 5/6)) / ((n + 1/2)(n + 1)) · x.
pub fn f16_series(x: f64) -> Result<HyperResult> {
    check_domain(x)?;
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let next = term * ((nf + 1.0 / 6.0) * (nf + 5.0 / 6.0)) / ((nf + 0.5) * (nf + 1.0)) * x;
        if next < TERM_CUTOFF * sum {
            // n iterations added n terms on top of a₀.
            return Ok(HyperResult {
                value: sum,
                terms_used: Some(n + 1),
                method: Method::Series,
            });
        }
        sum += next;
        term = next;
    }
    Err(Error::SeriesDivergence {
        x,
        max_terms: MAX_TERMS,
    })
}

/// Closed form cos(2z/3)/cos z with z = arcsin(√x) ∈ [0, π/2).
pub fn f16_closed(x: f64) -> Result<HyperResult> {
    check_domain(x)?;
    let z = x.sqrt().asin();
    Ok(HyperResult {
        value: (2.0 * z / 3.0).cos() / z.cos(),
        terms_used: None,
        method: Method::Closed,
    })
}

/// Production evaluation of F(1/6, 5/6; 1/2; x): the closed form.
pub fn f16(x: f64) -> Result<f64> {
    Ok(f16_closed(x)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Golden values pinned offline at 50 digits: F(1/2) = √6/2 and
    /// F(3/4) = 2·cos(2π/9).
    const F_HALF: f64 = 1.224_744_871_391_589_1;
    const F_THREE_QUARTERS: f64 = 1.532_088_886_237_956_1;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "got {actual:.17e}, want {expected:.17e} within {tol:.1e}"
        );
    }

    #[test]
    fn series_at_zero_is_exactly_one() {
        let r = f16_series(0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.terms_used, Some(1));
        assert_eq!(r.method, Method::Series);
    }

    #[test]
    fn closed_at_zero_is_exactly_one() {
        let r = f16_closed(0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.terms_used, None);
        assert_eq!(r.method, Method::Closed);
    }

    #[test]
    fn golden_value_at_half() {
        assert_close(f16_series(0.5).unwrap().value, F_HALF, 1e-13);
        assert_close(f16_closed(0.5).unwrap().value, F_HALF, 1e-13);
        assert_close(f16(0.5).unwrap(), 6.0_f64.sqrt() / 2.0, 1e-13);
    }

    #[test]
    fn golden_value_at_three_quarters() {
        assert_close(f16_series(0.75).unwrap().value, F_THREE_QUARTERS, 1e-13);
        assert_close(f16_closed(0.75).unwrap().value, F_THREE_QUARTERS, 1e-13);
        assert_close(
            f16(0.75).unwrap(),
            2.0 * (2.0 * std::f64::consts::PI / 9.0).cos(),
            1e-13,
        );
    }

    #[test]
    fn series_matches_closed_near_one() {
        let series = f16_series(0.99).unwrap().value;
        let closed = f16_closed(0.99).unwrap().value;
        assert!((series - closed).abs() <= 1e-10 * closed);
    }

    #[test]
    fn series_matches_closed_on_grid() {
        for i in 0..=18 {
            let x = 0.05 * i as f64;
            let series = f16_series(x).unwrap().value;
            let closed = f16_closed(x).unwrap().value;
            assert!(
                (series - closed).abs() <= 1e-12 * closed,
                "x = {x}: series {series:.17e} vs closed {closed:.17e}"
            );
        }
    }

    #[test]
    fn strictly_increasing_on_grid() {
        let mut prev = 0.0;
        for i in 0..=18 {
            let x = 0.05 * i as f64;
            let v = f16(x).unwrap();
            assert!(v >= 1.0);
            assert!(v > prev, "not increasing at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn term_count_stays_small_below_half() {
        // 49 terms at x = 0.5 under the 2^-53 cutoff; the textbook ratio-test
        // estimate of ~40 is optimistic for this slowly decaying series.
        for i in 0..=10 {
            let x = 0.05 * i as f64;
            let used = f16_series(x).unwrap().terms_used.unwrap();
            assert!(used <= 50, "x = {x}: {used} terms");
        }
        assert_eq!(f16_series(0.5).unwrap().terms_used, Some(49));
    }

    #[test]
    fn domain_errors() {
        for bad in [-0.1, 1.0, 1.5, f64::NAN] {
            assert!(matches!(f16_series(bad), Err(Error::Domain { .. })));
            assert!(matches!(f16_closed(bad), Err(Error::Domain { .. })));
            assert!(matches!(f16(bad), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn series_cap_trips_next_to_one() {
        let x = 1.0 - 1e-16;
        assert!(matches!(
            f16_series(x),
            Err(Error::SeriesDivergence { .. })
        ));
    }
}
