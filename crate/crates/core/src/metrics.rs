//! Achievable sum-rate, hardware power and power efficiency.

use crate::error::{Error, Result};
use crate::linalg::CMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Architecture {
    FullyDigital,
    FullPahp,
    LahpAdaptive,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [
        Architecture::FullyDigital,
        Architecture::FullPahp,
        Architecture::LahpAdaptive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Architecture::FullyDigital => "fully_digital",
            Architecture::FullPahp => "full_pahp",
            Architecture::LahpAdaptive => "lahp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

/// Per-component power draw in milliwatts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConstants {
    pub p_amplifier: f64,
    pub p_phase_shifter: f64,
    pub p_splitter: f64,
    pub p_combiner: f64,
    pub p_rf_chain: f64,
    pub p_switch: f64,
    pub p_transmit: f64,
}

impl Default for PowerConstants {
    fn default() -> Self {
        Self {
            p_amplifier: 20.0,
            p_phase_shifter: 30.0,
            p_splitter: 10.0,
            p_combiner: 10.0,
            p_rf_chain: 250.0,
            p_switch: 5.0,
            p_transmit: 2500.0,
        }
    }
}

/// Hardware power of an architecture in milliwatts. The fully digital
/// transmitter ignores `n_rf` and uses one RF chain per antenna.
pub fn hardware_power(arch: Architecture, n: usize, n_rf: usize, c: &PowerConstants) -> f64 {
    let n = n as f64;
    let n_rf = n_rf as f64;
    match arch {
        Architecture::FullyDigital => n * c.p_amplifier + n * c.p_rf_chain,
        Architecture::FullPahp => {
            n * c.p_amplifier
                + n_rf * n * c.p_phase_shifter
                + n_rf * c.p_splitter
                + n * c.p_combiner
                + n_rf * c.p_rf_chain
        }
        Architecture::LahpAdaptive => {
            n * c.p_amplifier
                + n_rf * n * c.p_switch
                + n_rf * c.p_splitter
                + n * c.p_combiner
                + n_rf * c.p_rf_chain
        }
    }
}

/// Sum-rate per watt of transmit plus hardware power, in bits/s/Hz/W.
pub fn power_efficiency(
    rate: f64,
    arch: Architecture,
    n: usize,
    n_rf: usize,
    c: &PowerConstants,
) -> Result<f64> {
    if rate.is_nan() || rate < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "rate must be non-negative, got {rate}"
        )));
    }
    Ok(rate / ((c.p_transmit + hardware_power(arch, n, n_rf, c)) / 1000.0))
}

/// Noise variance for a transmit SNR in dB, with the precoder normalized to
/// `||F||_F^2 = n_streams`.
pub fn noise_variance(snr_db: f64, n_streams: usize) -> f64 {
    n_streams as f64 / 10f64.powf(snr_db / 10.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    pub sum_rate: f64,
    pub per_user_sinr: Vec<f64>,
}

/// A neighboring base station: its channel to our users and its precoder.
#[derive(Debug, Clone, Copy)]
pub struct Interferer<'a> {
    pub channel: &'a CMat,
    pub precoder: &'a CMat,
}

/// Downlink sum-rate of users with channel rows `h` under precoder `f`
/// (column `k` carries user `k`'s stream).
pub fn sum_rate(
    h: &CMat,
    f: &CMat,
    noise_var: f64,
    interferers: &[Interferer<'_>],
) -> Result<RateResult> {
    if noise_var.is_nan() || noise_var <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be positive, got {noise_var}"
        )));
    }
    if h.ncols() != f.nrows() || f.ncols() != h.nrows() {
        return Err(Error::dims(
            "sum_rate",
            format!("precoder {}x{}", h.ncols(), h.nrows()),
            format!("{}x{}", f.nrows(), f.ncols()),
        ));
    }
    let n_users = h.nrows();
    let mut cross_power = vec![0.0; n_users];
    for i in interferers {
        if i.channel.nrows() != n_users || i.channel.ncols() != i.precoder.nrows() {
            return Err(Error::dims(
                "sum_rate interferer",
                format!("{n_users} rows matching precoder"),
                format!(
                    "channel {}x{}, precoder {}x{}",
                    i.channel.nrows(),
                    i.channel.ncols(),
                    i.precoder.nrows(),
                    i.precoder.ncols()
                ),
            ));
        }
        let g = i.channel * i.precoder;
        for (k, p) in cross_power.iter_mut().enumerate() {
            *p += g.row(k).norm_squared();
        }
    }
    let hf = h * f;
    let per_user_sinr: Vec<f64> = (0..n_users)
        .map(|k| {
            let signal = hf[(k, k)].norm_sqr();
            let intra = hf.row(k).norm_squared() - signal;
            signal / (intra.max(0.0) + cross_power[k] + noise_var)
        })
        .collect();
    let sum_rate = per_user_sinr.iter().map(|s| (1.0 + s).log2()).sum();
    Ok(RateResult {
        sum_rate,
        per_user_sinr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn hardware_power_table() {
        let c = PowerConstants::default();
        assert_eq!(
            hardware_power(Architecture::FullyDigital, 256, 16, &c),
            69_120.0
        );
        assert_eq!(
            hardware_power(Architecture::FullPahp, 256, 16, &c),
            134_720.0
        );
        assert_eq!(
            hardware_power(Architecture::LahpAdaptive, 256, 16, &c),
            32_320.0
        );
    }

    #[test]
    fn hardware_power_is_linear_in_each_constant() {
        let base = PowerConstants::default();
        let fields: [fn(&mut PowerConstants) -> &mut f64; 6] = [
            |c| &mut c.p_amplifier,
            |c| &mut c.p_phase_shifter,
            |c| &mut c.p_splitter,
            |c| &mut c.p_combiner,
            |c| &mut c.p_rf_chain,
            |c| &mut c.p_switch,
        ];
        for arch in Architecture::ALL {
            for field in fields {
                let mut zero = base;
                *field(&mut zero) = 0.0;
                let mut one = base;
                *field(&mut one) = 1.0;
                let mut three = base;
                *field(&mut three) = 3.0;
                let p0 = hardware_power(arch, 64, 8, &zero);
                let p1 = hardware_power(arch, 64, 8, &one);
                let p3 = hardware_power(arch, 64, 8, &three);
                assert!(((p3 - p0) - 3.0 * (p1 - p0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn efficiency_examples() {
        let c = PowerConstants::default();
        let lahp = power_efficiency(50.0, Architecture::LahpAdaptive, 256, 16, &c).unwrap();
        assert!((lahp - 50.0 / 34.82).abs() < 1e-12);
        assert!((lahp - 1.436).abs() < 1e-3);
        let pahp = power_efficiency(50.0, Architecture::FullPahp, 256, 16, &c).unwrap();
        let fd = power_efficiency(50.0, Architecture::FullyDigital, 256, 16, &c).unwrap();
        assert!((pahp - 50.0 / 137.22).abs() < 1e-12);
        assert!((fd - 50.0 / 71.62).abs() < 1e-12);
        assert!(pahp < fd);
        assert_eq!(
            power_efficiency(0.0, Architecture::FullPahp, 256, 16, &c).unwrap(),
            0.0
        );
        assert!(power_efficiency(-1.0, Architecture::FullPahp, 256, 16, &c).is_err());
    }

    #[test]
    fn lahp_beats_pahp_at_equal_rate() {
        let c = PowerConstants::default();
        for n_rf in 1..=32 {
            let l = power_efficiency(10.0, Architecture::LahpAdaptive, 256, n_rf, &c).unwrap();
            let p = power_efficiency(10.0, Architecture::FullPahp, 256, n_rf, &c).unwrap();
            assert!(l > p, "n_rf={n_rf}");
        }
    }

    #[test]
    fn single_user_rate() {
        let h = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
        let f = CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
        let r = sum_rate(&h, &f, 0.01, &[]).unwrap();
        assert!((r.sum_rate - 101f64.log2()).abs() < 1e-12);
        assert!((r.sum_rate - 6.658).abs() < 1e-3);
    }

    #[test]
    fn interference_lowers_sinr() {
        let h = CMat::identity(2, 2);
        let f = CMat::identity(2, 2);
        let g = CMat::from_element(2, 2, Complex64::new(0.5, 0.0));
        let clean = sum_rate(&h, &f, 0.1, &[]).unwrap();
        let dirty = sum_rate(
            &h,
            &f,
            0.1,
            &[Interferer {
                channel: &g,
                precoder: &f,
            }],
        )
        .unwrap();
        // cross power per user = 2 * 0.25
        assert!((dirty.per_user_sinr[0] - 1.0 / 0.6).abs() < 1e-12);
        assert!(dirty.sum_rate < clean.sum_rate);
    }

    #[test]
    fn sum_rate_rejects_bad_input() {
        let h = CMat::identity(2, 3);
        assert!(sum_rate(&h, &CMat::identity(2, 2), 1.0, &[]).is_err());
        assert!(sum_rate(&h, &CMat::identity(3, 2), 0.0, &[]).is_err());
    }

    #[test]
    fn noise_variance_convention() {
        assert!((noise_variance(20.0, 16) - 0.16).abs() < 1e-15);
    }
}
