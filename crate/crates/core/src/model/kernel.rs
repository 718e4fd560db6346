use super::ModelError;
use crate::linalg::{C64, I};
use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Pairwise coupling kernel multiplying `σ†_m σ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingKernel {
    /// Chiral-free waveguide: `−(i/2) Γ e^{ik|r|}`.
    Waveguide1D {
        /// Waveguide wavenumber.
        k1d: f64,
        /// Single-emitter rate into the guide.
        gamma1d: f64,
    },
    /// Free-space dipoles polarized perpendicular to the chain.
    FreeSpace3DTransverse {
        /// Resonant wavelength.
        lambda0: f64,
        /// Free-space single-emitter rate.
        gamma0: f64,
    },
    /// Free-space dipoles polarized along the chain.
    FreeSpace3DParallel {
        /// Resonant wavelength.
        lambda0: f64,
        /// Free-space single-emitter rate.
        gamma0: f64,
    },
}

impl CouplingKernel {
    /// True for the one-dimensional waveguide kernel.
    pub fn is_waveguide(&self) -> bool {
        matches!(self, CouplingKernel::Waveguide1D { .. })
    }

    /// Diagonal (self) term.
    pub fn self_term(&self) -> C64 {
        match *self {
            CouplingKernel::Waveguide1D { gamma1d, .. } => C64::new(0.0, -0.5 * gamma1d),
            CouplingKernel::FreeSpace3DTransverse { gamma0, .. }
            | CouplingKernel::FreeSpace3DParallel { gamma0, .. } => C64::new(0.0, -0.5 * gamma0),
        }
    }
}

/// `k·r` reduced to `[−π, π]`, with the product and the reduction carried in extended precision.
pub fn reduced_phase(k: f64, r: f64) -> f64 {
    let p = k * r;
    let err = libm::fma(k, r, -p);
    let turns = (p / TAU).round();
    let mut rem = libm::fma(-turns, TAU, p) - turns * TAU_LO + err;
    if rem > PI {
        rem -= TAU;
    } else if rem < -PI {
        rem += TAU;
    }
    rem
}

/// Coupling coefficient at separation `r ≥ 0`.
pub fn coupling_element(kernel: &CouplingKernel, r: f64) -> Result<C64, ModelError> {
    if !r.is_finite() || r.is_sign_negative() {
        return Err(ModelError::InvalidSeparation(r));
    }
    if r == 0.0 {
        return Ok(kernel.self_term());
    }
    Ok(match *kernel {
        CouplingKernel::Waveguide1D { k1d, gamma1d } => {
            let phi = reduced_phase(k1d, r);
            C64::new(0.0, -0.5 * gamma1d) * C64::new(phi.cos(), phi.sin())
        }
        CouplingKernel::FreeSpace3DTransverse { lambda0, gamma0 } => {
            let x = TAU * r / lambda0;
            let e = phase(x);
            let inv = 1.0 / x;
            e * (C64::new(inv - inv * inv * inv, inv * inv)) * (-0.75 * gamma0)
        }
        CouplingKernel::FreeSpace3DParallel { lambda0, gamma0 } => {
            let x = TAU * r / lambda0;
            let e = phase(x);
            let inv = 1.0 / x;
            e * (C64::new(inv * inv * inv, 0.0) - I * (inv * inv)) * (-1.5 * gamma0)
        }
    })
}

fn phase(x: f64) -> C64 {
    let p = reduced_phase(1.0, x);
    C64::new(p.cos(), p.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_4;

    const WG: CouplingKernel = CouplingKernel::Waveguide1D { k1d: FRAC_PI_4, gamma1d: 1.0 };

    #[test]
    fn waveguide_values() {
        assert_eq!(coupling_element(&WG, 0.0).unwrap(), C64::new(0.0, -0.5));
        let v = coupling_element(&WG, 1.0).unwrap();
        let s = 0.5 * FRAC_PI_4.sin();
        assert!((v - C64::new(s, -s)).norm() < 1e-15);
    }

    #[test]
    fn rejects_negative_zero_and_nan() {
        assert!(coupling_element(&WG, -0.0).is_err());
        assert!(coupling_element(&WG, -1.0).is_err());
        assert!(coupling_element(&WG, f64::NAN).is_err());
        assert!(coupling_element(&WG, f64::INFINITY).is_err());
    }

    #[test]
    fn phase_reduction_tracks_long_distances() {
        let k = 0.1676 * PI;
        let r = 1.0e7;
        let phi = reduced_phase(k, r);
        assert!(phi.abs() <= PI);
        // k r = 0.1676e7 π, an even multiple of π plus 0
        let exact = 0.0;
        assert!((phi - exact).abs() < 1e-7);
    }

    #[test]
    fn free_space_short_distance_limits() {
        for kernel in [
            CouplingKernel::FreeSpace3DTransverse { lambda0: 1.0, gamma0: 1.0 },
            CouplingKernel::FreeSpace3DParallel { lambda0: 1.0, gamma0: 1.0 },
        ] {
            assert_eq!(coupling_element(&kernel, 0.0).unwrap(), C64::new(0.0, -0.5));
            let near = coupling_element(&kernel, 1e-4).unwrap();
            assert!((near.im + 0.5).abs() < 1e-6, "{near}");
            let nearer = coupling_element(&kernel, 1e-5).unwrap();
            assert!(nearer.re.abs() > 100.0 * near.re.abs());
        }
    }

    #[test]
    fn free_space_far_field_decays_as_inverse_distance() {
        let kernel = CouplingKernel::FreeSpace3DTransverse { lambda0: 1.0, gamma0: 1.0 };
        let a = coupling_element(&kernel, 100.0).unwrap().norm();
        let b = coupling_element(&kernel, 200.0).unwrap().norm();
        assert!((a / b - 2.0).abs() < 1e-3);
        let par = CouplingKernel::FreeSpace3DParallel { lambda0: 1.0, gamma0: 1.0 };
        let a = coupling_element(&par, 100.0).unwrap().norm();
        let b = coupling_element(&par, 200.0).unwrap().norm();
        assert!((a / b - 4.0).abs() < 1e-2);
    }
}
