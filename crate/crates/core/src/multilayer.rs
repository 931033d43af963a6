//! Fresnel coefficients on the imaginary frequency axis and their
//! composition into multilayer reflection coefficients.
//!
//! Under the rotation omega -> i xi every layer's normal wavevector
//! becomes beta_i = i kappa_i with real kappa_i, so all reflection
//! coefficients are real and the exponential phase factors turn into
//! decaying exponentials exp(-2 kappa_j d_j).

use crate::constants::SPEED_OF_LIGHT;
use crate::materials::DielectricModel;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MultilayerError {
    #[error("layer stack needs at least two layers, got {0}")]
    TooFewLayers(usize),
    #[error("outermost layers must be semi-infinite and internal layers finite (layer {0})")]
    BadLayerThickness(usize),
    #[error("finite layer thickness must be positive, got {0} m")]
    NonPositiveThickness(f64),
    #[error("singular composition denominator |1 - r r e^(-2 kappa d)| < 1e-14; passive media cannot produce this, check inputs")]
    SingularDenominator,
    #[error("transverse mode requires xi > 0 and k_par >= 0, got ({xi}, {k_par})")]
    InvalidMode { xi: f64, k_par: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

/// One (polarization, xi, k_par) point of the mode integral.
#[derive(Debug, Clone, Copy)]
pub struct TransverseMode {
    pub polarization: Polarization,
    /// Imaginary frequency [rad/s].
    pub xi: f64,
    /// Parallel wavevector [rad/m].
    pub k_par: f64,
}

impl TransverseMode {
    pub fn new(polarization: Polarization, xi: f64, k_par: f64) -> Result<Self, MultilayerError> {
        if !(xi > 0.0 && k_par >= 0.0) {
            return Err(MultilayerError::InvalidMode { xi, k_par });
        }
        Ok(TransverseMode {
            polarization,
            xi,
            k_par,
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Layer {
    pub material: DielectricModel,
    /// `None` marks a semi-infinite layer.
    pub thickness: Option<f64>,
}

impl Layer {
    pub fn semi_infinite(material: DielectricModel) -> Self {
        Layer {
            material,
            thickness: None,
        }
    }

    pub fn finite(material: DielectricModel, thickness: f64) -> Result<Self, MultilayerError> {
        if !(thickness > 0.0) {
            return Err(MultilayerError::NonPositiveThickness(thickness));
        }
        Ok(Layer {
            material,
            thickness: Some(thickness),
        })
    }
}

/// Planar stack seen from the atom side (first layer is the half-space
/// the atom sits in). The perfect mirror variant returns r_TE = -1 and
/// r_TM = +1 exactly.
#[derive(Debug, Clone)]
pub enum LayerStack {
    PerfectMirror,
    Layers(Vec<Layer>),
}

impl LayerStack {
    pub fn new(layers: Vec<Layer>) -> Result<Self, MultilayerError> {
        if layers.len() < 2 {
            return Err(MultilayerError::TooFewLayers(layers.len()));
        }
        let last = layers.len() - 1;
        for (i, layer) in layers.iter().enumerate() {
            let outer = i == 0 || i == last;
            if outer != layer.thickness.is_none() {
                return Err(MultilayerError::BadLayerThickness(i));
            }
        }
        Ok(LayerStack::Layers(layers))
    }

    /// Reflection coefficient of the whole stack for one mode, built by
    /// composing interfaces from the deepest layer outwards.
    pub fn reflection(&self, mode: &TransverseMode) -> Result<f64, MultilayerError> {
        let layers = match self {
            LayerStack::PerfectMirror => {
                return Ok(match mode.polarization {
                    Polarization::Te => -1.0,
                    Polarization::Tm => 1.0,
                })
            }
            LayerStack::Layers(layers) => layers,
        };

        let eps: Vec<f64> = layers
            .iter()
            .map(|l| {
                l.material
                    .permittivity_imag(mode.xi)
                    .expect("xi > 0 by TransverseMode invariant")
            })
            .collect();
        let kap: Vec<f64> = eps.iter().map(|&e| kappa_from_eps(e, mode)).collect();

        let n = layers.len();
        let mut r = fresnel_r(mode.polarization, eps[n - 2], eps[n - 1], kap[n - 2], kap[n - 1]);
        for j in (1..n - 1).rev() {
            let d_j = layers[j].thickness.expect("internal layer is finite");
            let r_ij = fresnel_r(mode.polarization, eps[j - 1], eps[j], kap[j - 1], kap[j]);
            let r_ji = fresnel_r(mode.polarization, eps[j], eps[j - 1], kap[j], kap[j - 1]);
            let t_ij = fresnel_t(mode.polarization, eps[j - 1], eps[j], r_ij);
            let t_ji = fresnel_t(mode.polarization, eps[j], eps[j - 1], r_ji);
            r = compose_reflection(r_ij, t_ij, t_ji, r_ji, r, kap[j], d_j)?;
        }
        Ok(r)
    }
}

fn kappa_from_eps(eps: f64, mode: &TransverseMode) -> f64 {
    let q = mode.xi / SPEED_OF_LIGHT;
    (eps * q * q + mode.k_par * mode.k_par).sqrt()
}

/// Normal decay constant kappa_i = sqrt(eps_i(i xi) xi^2/c^2 + k_par^2).
pub fn kappa(material: &DielectricModel, mode: &TransverseMode) -> f64 {
    let eps = material
        .permittivity_imag(mode.xi)
        .expect("xi > 0 by TransverseMode invariant");
    kappa_from_eps(eps, mode)
}

/// Single-interface reflection coefficient from medium i into medium j.
pub fn fresnel_r(pol: Polarization, eps_i: f64, eps_j: f64, kappa_i: f64, kappa_j: f64) -> f64 {
    match pol {
        Polarization::Te => (kappa_i - kappa_j) / (kappa_i + kappa_j),
        Polarization::Tm => (eps_j * kappa_i - eps_i * kappa_j) / (eps_j * kappa_i + eps_i * kappa_j),
    }
}

/// Single-interface transmission coefficient matching [`fresnel_r`].
pub fn fresnel_t(pol: Polarization, eps_i: f64, eps_j: f64, r_ij: f64) -> f64 {
    match pol {
        Polarization::Te => 1.0 + r_ij,
        Polarization::Tm => eps_i / eps_j * (1.0 + r_ij),
    }
}

/// Three-layer composition: an i|j interface backed, across a gap d_j in
/// medium j, by a composite coefficient r_jk.
pub fn compose_reflection(
    r_ij: f64,
    t_ij: f64,
    t_ji: f64,
    r_ji: f64,
    r_jk: f64,
    kappa_j: f64,
    d_j: f64,
) -> Result<f64, MultilayerError> {
    let decay = (-2.0 * kappa_j * d_j).exp();
    let denom = 1.0 - r_ji * r_jk * decay;
    if denom.abs() < 1e-14 {
        return Err(MultilayerError::SingularDenominator);
    }
    Ok(r_ij + t_ij * t_ji * r_jk * decay / denom)
}

/// Closed-form four-layer coefficient, kept as an independent oracle for
/// the recursive composition.
pub fn four_layer_explicit(
    eps: [f64; 4],
    d2: f64,
    d3: f64,
    mode: &TransverseMode,
) -> f64 {
    let pol = mode.polarization;
    let kap: Vec<f64> = eps.iter().map(|&e| kappa_from_eps(e, mode)).collect();
    let r = |i: usize, j: usize| fresnel_r(pol, eps[i], eps[j], kap[i], kap[j]);
    let (r12, r21) = (r(0, 1), r(1, 0));
    let (r23, r32) = (r(1, 2), r(2, 1));
    let r34 = r(2, 3);
    let s2 = (-2.0 * kap[1] * d2).exp();
    let s3 = (-2.0 * kap[2] * d3).exp();

    let inner = s3 * (r32 + 1.0) * r34 + r23 * (1.0 + s3 * r34);
    let denom = s3 * r32 * r34 + s2 * r21 * inner - 1.0;
    r12 - s2 * (r12 + 1.0) * (r21 + 1.0) * inner / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::DielectricModel;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    const C: f64 = SPEED_OF_LIGHT;

    fn mode(pol: Polarization, xi: f64, k_par: f64) -> TransverseMode {
        TransverseMode::new(pol, xi, k_par).unwrap()
    }

    #[test]
    fn kappa_vacuum_normal_incidence() {
        let m = mode(Polarization::Te, 2.4e15, 0.0);
        let k = kappa(&DielectricModel::vacuum(), &m);
        assert!((k - 2.4e15 / C).abs() / (2.4e15 / C) < 1e-14);
    }

    #[test]
    fn kappa_static_limit_is_k_par() {
        let m = mode(Polarization::Te, 1.0, 1e7);
        let k = kappa(&DielectricModel::constant(5.0).unwrap(), &m);
        assert!((k - 1e7).abs() / 1e7 < 1e-12);
    }

    #[test]
    fn kappa_reference_value() {
        let m = mode(Polarization::Tm, 2.4e15, 1e7);
        let k = kappa(&DielectricModel::constant(5.0).unwrap(), &m);
        let expected = (5.0 * (2.4e15 / C) * (2.4e15 / C) + 1e14).sqrt();
        assert!((k - expected).abs() / expected < 1e-14);
        assert!((expected - 2.0505e7).abs() < 1e3);
    }

    #[test]
    fn fresnel_no_interface() {
        for pol in [Polarization::Te, Polarization::Tm] {
            let r = fresnel_r(pol, 3.0, 3.0, 1e7, 1e7);
            assert_eq!(r, 0.0);
            assert!((fresnel_t(pol, 3.0, 3.0, r) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn fresnel_perfect_mirror_limit() {
        // eps_j -> infinity: kappa_j ~ sqrt(eps_j) xi / c
        let xi = 2.4e15;
        let eps_j = 1e12;
        let ki = xi / C;
        let kj = (eps_j_f64(eps_j) * ki * ki).sqrt();
        let r_te = fresnel_r(Polarization::Te, 1.0, eps_j, ki, kj);
        let r_tm = fresnel_r(Polarization::Tm, 1.0, eps_j, ki, kj);
        assert!((r_te + 1.0).abs() < 1e-5);
        assert!((r_tm - 1.0).abs() < 1e-5);
        assert!(fresnel_t(Polarization::Te, 1.0, eps_j, -1.0).abs() < 1e-15);
    }

    fn eps_j_f64(e: f64) -> f64 {
        e
    }

    #[test]
    fn fresnel_vacuum_to_dielectric_normal_incidence() {
        let xi = 2.4e15;
        let ki = xi / C;
        let kj = 5.0f64.sqrt() * ki;
        let r_te = fresnel_r(Polarization::Te, 1.0, 5.0, ki, kj);
        let expected = (1.0 - 5.0f64.sqrt()) / (1.0 + 5.0f64.sqrt());
        assert!((r_te - expected).abs() < 1e-14);
        let r_tm = fresnel_r(Polarization::Tm, 1.0, 5.0, ki, kj);
        let t_tm = fresnel_t(Polarization::Tm, 1.0, 5.0, r_tm);
        assert!((t_tm - 0.2 * (1.0 + r_tm)).abs() < 1e-15);
    }

    #[test]
    fn compose_collapses_without_back_reflection() {
        let r = compose_reflection(0.3, 1.3, 0.7, -0.3, 0.0, 1e7, 1e-8).unwrap();
        assert_eq!(r, 0.3);
    }

    #[test]
    fn compose_decouples_for_thick_gap() {
        let r = compose_reflection(0.3, 1.3, 0.7, -0.3, 0.9, 1e7, 1e-2).unwrap();
        assert_eq!(r, 0.3);
    }

    #[test]
    fn compose_zero_gap_reproduces_direct_fresnel() {
        // 1000 random (eps, xi, k_par) draws: composing interfaces 1|2 and
        // 2|3 with d = 0 must equal the direct 1|3 coefficient
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let e1: f64 = rng.gen_range(1.0..10.0);
            let e2: f64 = rng.gen_range(1.0..10.0);
            let e3: f64 = rng.gen_range(1.0..10.0);
            let xi = 10f64.powf(rng.gen_range(12.0..16.0));
            let k_par = 10f64.powf(rng.gen_range(4.0..8.0));
            for pol in [Polarization::Te, Polarization::Tm] {
                let m = mode(pol, xi, k_par);
                let k1 = kappa_from_eps(e1, &m);
                let k2 = kappa_from_eps(e2, &m);
                let k3 = kappa_from_eps(e3, &m);
                let r12 = fresnel_r(pol, e1, e2, k1, k2);
                let r21 = fresnel_r(pol, e2, e1, k2, k1);
                let r23 = fresnel_r(pol, e2, e3, k2, k3);
                let t12 = fresnel_t(pol, e1, e2, r12);
                let t21 = fresnel_t(pol, e2, e1, r21);
                let composed = compose_reflection(r12, t12, t21, r21, r23, k2, 0.0).unwrap();
                let direct = fresnel_r(pol, e1, e3, k1, k3);
                assert!(
                    (composed - direct).abs() <= 1e-10 * direct.abs().max(1e-3),
                    "pol {pol:?}: {composed} vs {direct}"
                );
            }
        }
    }

    fn paper_stack(d_au: f64, d_vac: f64) -> LayerStack {
        let gold = DielectricModel::drude(1.38e16, 4.08e13).unwrap();
        let si = DielectricModel::constant(5.0).unwrap();
        LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::vacuum()),
            Layer::finite(gold, d_au).unwrap(),
            Layer::finite(DielectricModel::vacuum(), d_vac).unwrap(),
            Layer::semi_infinite(si),
        ])
        .unwrap()
    }

    #[test]
    fn two_layer_stack_is_plain_fresnel() {
        let si = DielectricModel::constant(5.0).unwrap();
        let stack = LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::vacuum()),
            Layer::semi_infinite(si),
        ])
        .unwrap();
        for pol in [Polarization::Te, Polarization::Tm] {
            let m = mode(pol, 2.4e15, 3e6);
            let k1 = kappa(&DielectricModel::vacuum(), &m);
            let k2 = kappa(&si, &m);
            let direct = fresnel_r(pol, 1.0, 5.0, k1, k2);
            assert_eq!(stack.reflection(&m).unwrap(), direct);
        }
    }

    #[test]
    fn distant_slab_decouples_to_isolated_shield() {
        let gold = DielectricModel::drude(1.38e16, 4.08e13).unwrap();
        let shield_only = LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::vacuum()),
            Layer::finite(gold, 50e-9).unwrap(),
            Layer::semi_infinite(DielectricModel::vacuum()),
        ])
        .unwrap();
        let far = paper_stack(50e-9, 1e-3);
        for pol in [Polarization::Te, Polarization::Tm] {
            let m = mode(pol, 2.4e15, 3e6);
            let a = far.reflection(&m).unwrap();
            let b = shield_only.reflection(&m).unwrap();
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn reflection_magnitude_bounded_by_one() {
        // grid of (xi, k_par) spanning 8 decades each
        let stack = paper_stack(50e-9, 5e-6);
        for pol in [Polarization::Te, Polarization::Tm] {
            for i in 0..=16 {
                for j in 0..=16 {
                    let xi = 1e10 * 10f64.powf(i as f64 / 2.0);
                    let k_par = 1e0 * 10f64.powf(j as f64 / 2.0);
                    let m = mode(pol, xi, k_par);
                    let r = stack.reflection(&m).unwrap();
                    assert!(r.abs() <= 1.0 + 1e-12, "r({xi}, {k_par}) = {r}");
                }
            }
        }
    }

    #[test]
    fn recursive_matches_explicit_four_layer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let eps = [
                1.0,
                rng.gen_range(1.0..200.0),
                rng.gen_range(1.0..10.0),
                rng.gen_range(1.0..10.0),
            ];
            let d2 = 10f64.powf(rng.gen_range(-8.0..-5.0));
            let d3 = 10f64.powf(rng.gen_range(-7.0..-4.0));
            let xi = 10f64.powf(rng.gen_range(12.0..16.0));
            let k_par = 10f64.powf(rng.gen_range(3.0..7.5));
            for pol in [Polarization::Te, Polarization::Tm] {
                let m = mode(pol, xi, k_par);
                let stack = LayerStack::new(vec![
                    Layer::semi_infinite(DielectricModel::constant(eps[0]).unwrap()),
                    Layer::finite(DielectricModel::constant(eps[1]).unwrap(), d2).unwrap(),
                    Layer::finite(DielectricModel::constant(eps[2]).unwrap(), d3).unwrap(),
                    Layer::semi_infinite(DielectricModel::constant(eps[3]).unwrap()),
                ])
                .unwrap();
                let recursive = stack.reflection(&m).unwrap();
                let explicit = four_layer_explicit(eps, d2, d3, &m);
                assert!(
                    (recursive - explicit).abs() <= 1e-12 * explicit.abs().max(1e-15),
                    "{recursive} vs {explicit}"
                );
            }
        }
    }

    #[test]
    fn shield_thickening_approaches_half_space() {
        // |r_1234 - r_12(Au half-space)| decreases monotonically in d_Au
        let gold = DielectricModel::drude(1.38e16, 4.08e13).unwrap();
        let half_space = LayerStack::new(vec![
            Layer::semi_infinite(DielectricModel::vacuum()),
            Layer::semi_infinite(gold),
        ])
        .unwrap();
        for pol in [Polarization::Te, Polarization::Tm] {
            let m = mode(pol, 1e15, 1e6);
            let r_half = half_space.reflection(&m).unwrap();
            let mut prev = f64::INFINITY;
            for d_au in [10e-9, 20e-9, 50e-9, 100e-9, 200e-9] {
                let r = paper_stack(d_au, 5e-6).reflection(&m).unwrap();
                let gap = (r - r_half).abs();
                assert!(gap <= prev, "d_Au = {d_au}: {gap} > {prev}");
                prev = gap;
            }
        }
    }

    #[test]
    fn perfect_mirror_values() {
        let m_te = mode(Polarization::Te, 1e15, 1e6);
        let m_tm = mode(Polarization::Tm, 1e15, 1e6);
        assert_eq!(LayerStack::PerfectMirror.reflection(&m_te).unwrap(), -1.0);
        assert_eq!(LayerStack::PerfectMirror.reflection(&m_tm).unwrap(), 1.0);
    }

    #[test]
    fn stack_validation() {
        let vac = DielectricModel::vacuum();
        assert!(matches!(
            LayerStack::new(vec![Layer::semi_infinite(vac)]),
            Err(MultilayerError::TooFewLayers(1))
        ));
        assert!(matches!(
            LayerStack::new(vec![
                Layer::semi_infinite(vac),
                Layer::semi_infinite(vac),
                Layer::semi_infinite(vac),
            ]),
            Err(MultilayerError::BadLayerThickness(1))
        ));
        assert!(Layer::finite(vac, 0.0).is_err());
    }
}
