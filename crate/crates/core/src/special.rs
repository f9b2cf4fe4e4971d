//! Special functions backing the statistical tests and the closed-form
//! pricer: error function, normal CDF, regularized incomplete gamma,
//! Kolmogorov distribution and the asymptotic Anderson-Darling CDF.
//!
//! The normal CDF here is the reference used to validate the faster Moro
//! inversion, so it has to be accurate to better than 1e-12 everywhere.
//! It is built from a Maclaurin series for small arguments and a Lentz
//! continued fraction in the tails; both iterate to machine-epsilon
//! convergence rather than a fixed order.

const FRAC_2_SQRT_PI: f64 = 1.128_379_167_095_512_6;
const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// erf(x) for |x| <= 3 via the confluent series
/// erf(x) = (2/sqrt(pi)) x e^{-x^2} sum_{n>=0} (2x^2)^n / (1*3*...*(2n+1)).
/// All terms are positive, so there is no cancellation.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut denom = 1.0;
    for n in 1..200 {
        denom += 2.0;
        term *= 2.0 * x2 / denom;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
        debug_assert!(n < 199, "erf series did not converge");
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() * sum
}

/// erfc(x) for x >= 2 via the Legendre continued fraction
/// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
/// evaluated with the modified Lentz algorithm.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x.max(TINY);
    let mut c = f;
    let mut d = 0.0;
    let mut n = 0.5f64;
    for _ in 0..300 {
        // a_k = k/2, b_k = x
        d = x + n * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + n / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
        n += 0.5;
    }
    (-x * x).exp() / (f * std::f64::consts::PI.sqrt())
}

pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        -erf(-x)
    } else if x < 2.0 {
        erf_series(x)
    } else {
        1.0 - erfc_cf(x)
    }
}

pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        // the continued fraction keeps full relative accuracy where
        // 1 - erf would cancel
        erfc_cf(x)
    }
}

/// Standard normal CDF. Abs error below 1e-14 on the whole line: both tails
/// route through erfc so small probabilities keep full relative accuracy.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// ln Gamma via the Lanczos approximation (g = 7, 9 terms), x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection keeps the approximation in its accurate range
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma P(a, x) by its power series; x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..500 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma Q(a, x) by continued fraction; x >= a + 1.
fn gamma_q_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a).
/// Q(k/2, d/2) is the chi-square survival function with k degrees of freedom.
pub fn reg_gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_cf(a, x)
    }
}

/// Chi-square survival probability P[X > stat] with df degrees of freedom.
pub fn chi_square_survival(stat: f64, df: f64) -> f64 {
    reg_gamma_q(df / 2.0, stat / 2.0).clamp(0.0, 1.0)
}

/// Kolmogorov distribution K(y) = sum_{k=-inf}^{inf} (-1)^k e^{-2 k^2 y^2},
/// the asymptotic law of sqrt(n) * D_n under the null.
///
/// Below the crossover the alternating sum cancels catastrophically, so
/// the equivalent theta-transformed series
/// K(y) = sqrt(2 pi)/y * sum_{k>=1} e^{-(2k-1)^2 pi^2 / (8 y^2)}
/// is used there; every term is positive and the first already carries
/// almost all the mass.
pub fn kolmogorov_cdf(y: f64) -> f64 {
    if y <= 1e-8 {
        return 0.0;
    }
    let sum = if y < 1.18 {
        let f = std::f64::consts::PI.powi(2) / (8.0 * y * y);
        let mut sum = 0.0;
        for k in 1..100u32 {
            let odd = (2 * k - 1) as f64;
            let term = (-odd * odd * f).exp();
            sum += term;
            if term < sum * 1e-16 {
                break;
            }
        }
        (2.0 * std::f64::consts::PI).sqrt() / y * sum
    } else {
        let mut sum = 1.0;
        let mut sign = -1.0;
        for k in 1..1000 {
            let term = (-2.0 * (k as f64) * (k as f64) * y * y).exp();
            sum += 2.0 * sign * term;
            if term < 1e-16 {
                break;
            }
            sign = -sign;
        }
        sum
    };
    sum.clamp(0.0, 1.0)
}

/// Asymptotic CDF of the Anderson-Darling statistic for a fully specified
/// null (Marsaglia & Marsaglia 2004 fit, accurate to ~5 digits, which is
/// plenty for verdicts and cross-test comparisons).
pub fn anderson_darling_cdf(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    let v = if z < 2.0 {
        z.powf(-0.5)
            * (-1.2337141 / z).exp()
            * (2.00012
                + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z)
                    * z)
    } else {
        (-(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z)
            .exp())
        .exp()
    };
    v.clamp(0.0, 1.0)
}
