//! Filter banks for the dual tree.
//!
//! Level 1 uses a near-symmetric biorthogonal pair: a 13-tap analysis lowpass
//! with exact dyadic coefficients and the 19-tap dual lowpass solved from the
//! half-band product constraint plus two vanishing moments. Their product is
//! half-band to rational precision, so full-rate synthesis reconstructs
//! exactly.
//!
//! Levels >= 2 use a 14-tap quarter-shift orthonormal filter (Kingsbury
//! style). The coefficients below were projected onto the orthonormality
//! manifold (unit energy, vanishing even-lag autocorrelation, DC gain
//! sqrt(2)) to a residual below 1e-15, which is what makes the decimated
//! stages invertible by their adjoints to machine precision.

use std::sync::OnceLock;

/// 13-tap level-1 analysis lowpass; DC gain 1.
pub(crate) const H0O: [f64; 13] = [
    -0.0017578125,
    0.0,
    0.022265625,
    -0.046875,
    -0.0482421875,
    0.296875,
    0.55546875,
    0.296875,
    -0.0482421875,
    -0.046875,
    0.022265625,
    0.0,
    -0.0017578125,
];

/// 19-tap level-1 synthesis lowpass; DC gain 1.
pub(crate) const G0O: [f64; 19] = [
    2.903529575892857e-5,
    0.0,
    -0.0007734898158482143,
    -0.0007742745535714285,
    0.0055301339285714285,
    0.01572265625,
    -0.04192731584821428,
    -0.052797154017857145,
    0.2871416364397321,
    0.5756975446428572,
    0.2871416364397321,
    -0.052797154017857145,
    -0.04192731584821428,
    0.01572265625,
    0.0055301339285714285,
    -0.0007742745535714285,
    -0.0007734898158482143,
    0.0,
    2.903529575892857e-5,
];

/// 14-tap quarter-shift lowpass for tree a; DC gain sqrt(2), zero at pi.
pub(crate) const H0A: [f64; 14] = [
    0.003253131213957238,
    -0.0038831997181308746,
    0.03466023431107872,
    -0.03887268786365328,
    -0.11720401574999431,
    0.2752954798644966,
    0.7561455341226777,
    0.5688105339884558,
    0.011865973985477295,
    -0.10671168816241423,
    0.02382537865040067,
    0.01702521969009414,
    -0.0054394553470497545,
    -0.004556876612300636,
];

/// The fully assembled analysis/synthesis banks.
pub(crate) struct Filters {
    pub h0o: [f64; 13],
    pub h1o: [f64; 19],
    pub g0o: [f64; 19],
    pub g1o: [f64; 13],
    pub h0a: [f64; 14],
    pub h0b: [f64; 14],
    pub h1a: [f64; 14],
    pub h1b: [f64; 14],
}

/// Modulate a symmetric odd-length filter about its centre: out[i] =
/// (-1)^(i - centre) * f[i].
fn modulate_centered<const N: usize>(f: &[f64; N]) -> [f64; N] {
    let centre = (N - 1) / 2;
    let mut out = [0.0; N];
    for (i, o) in out.iter_mut().enumerate() {
        let sign = if (i as isize - centre as isize) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        *o = sign * f[i];
    }
    out
}

pub(crate) fn filters() -> &'static Filters {
    static FILTERS: OnceLock<Filters> = OnceLock::new();
    FILTERS.get_or_init(|| {
        let mut h0b = H0A;
        h0b.reverse();
        let mut h1a = [0.0; 14];
        let mut h1b = [0.0; 14];
        for n in 0..14 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            h1a[n] = sign * h0b[n];
            h1b[n] = sign * H0A[n];
        }
        Filters {
            h0o: H0O,
            h1o: modulate_centered(&G0O),
            g0o: G0O,
            g1o: modulate_centered(&H0O),
            h0a: H0A,
            h0b,
            h1a,
            h1b,
        }
    })
}
