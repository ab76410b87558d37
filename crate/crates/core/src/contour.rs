//! Circle contours, Cauchy coefficient extraction, and the kernels and
//! double-contour transforms that reconstruct the Rankin-Cohen brackets.
//!
//! All integrals are trapezoidal rules in the angle, which are
//! spectrally accurate for holomorphic integrands; on the Laurent
//! polynomials produced by polynomial test functions they are exact up
//! to rounding. Summation is compensated (Neumaier) in a fixed node
//! order, so results are deterministic regardless of how callers
//! parallelize sweeps.

use num_complex::Complex64;

use crate::rc::WeightPair;

#[derive(Debug, thiserror::Error)]
pub enum ContourError {
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("non-finite sample at node {node:?}")]
    NonFiniteSample { node: (usize, usize) },
    #[error("kernel pole hit: |zeta{which} - z| = {distance:e} below threshold")]
    PoleHit { which: u8, distance: f64 },
    #[error("kernel denominator too small: |den| = {magnitude:e} against scale {scale:e}")]
    SmallDenominator { magnitude: f64, scale: f64 },
    #[error("series trust region violated: |s| = {s_abs} exceeds 0.5")]
    TrustRegion { s_abs: f64 },
    #[error("contour admissibility violated: |t| (r1 + r2) = {lhs:e} must stay below r1 r2 = {rhs:e}")]
    Admissibility { lhs: f64, rhs: f64 },
    #[error("quadrature did not converge at {nodes} nodes; last delta {last_delta:e}")]
    NonConvergence { nodes: usize, last_delta: f64 },
    #[error("point outside domain: {0}")]
    OutsideDomain(String),
}

/// A circle `center + radius e^(i theta)` sampled at `nodes` equispaced
/// points; `nodes` must be a power of two, at least 16.
#[derive(Clone, Copy, Debug)]
pub struct Contour {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl Contour {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self, ContourError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ContourError::InvalidContour(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if nodes < 16 || !nodes.is_power_of_two() {
            return Err(ContourError::InvalidContour(format!(
                "node count must be a power of two >= 16, got {nodes}"
            )));
        }
        Ok(Contour { center, radius, nodes })
    }

    pub fn node(&self, k: usize) -> Complex64 {
        self.center + self.radius * unit_root(k, self.nodes)
    }
}

/// Domain of holomorphy for the two-variable inputs; each kind has a
/// closed-form distance to the boundary.
#[derive(Clone, Copy, Debug)]
pub enum DomainDescriptor {
    WholePlane,
    UpperHalfPlane,
    Disk { center: Complex64, radius: f64 },
}

impl DomainDescriptor {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            DomainDescriptor::WholePlane => true,
            DomainDescriptor::UpperHalfPlane => z.im > 0.0,
            DomainDescriptor::Disk { center, radius } => (z - center).norm() < radius,
        }
    }

    /// Distance from `z` to the boundary; infinite for the whole plane.
    pub fn boundary_distance(&self, z: Complex64) -> Result<f64, ContourError> {
        if !self.contains(z) {
            return Err(ContourError::OutsideDomain(format!("{z} not in {self:?}")));
        }
        Ok(match *self {
            DomainDescriptor::WholePlane => f64::INFINITY,
            DomainDescriptor::UpperHalfPlane => z.im,
            DomainDescriptor::Disk { center, radius } => radius - (z - center).norm(),
        })
    }
}

/// Whether `(z, t)` lies in the region where the generating transform
/// is holomorphic: `2|t| < d(z, boundary)`.
pub fn in_ud(z: Complex64, t: Complex64, domain: &DomainDescriptor) -> Result<bool, ContourError> {
    let d = domain.boundary_distance(z)?;
    Ok(2.0 * t.norm() < d)
}

/// Default contour radius about `z`: `0.8 d(z, boundary)`, or 1 on the
/// whole plane.
pub fn default_radius(z: Complex64, domain: &DomainDescriptor) -> Result<f64, ContourError> {
    let d = domain.boundary_distance(z)?;
    Ok(if d.is_finite() { 0.8 * d } else { 1.0 })
}

/// Kernel selector mirroring the three transform families.
#[derive(Clone, Debug)]
pub enum KernelSpec {
    /// Fixed-order kernel of the bracket reconstruction.
    Al { weights: WeightPair, ell: u32 },
    /// Resolvent-style generating kernel at parameter `t`.
    At { weights: WeightPair, t: Complex64 },
    /// Series kernel built from a truncated `h`.
    Ah { weights: WeightPair, h: HSeries, t: Complex64 },
}

impl KernelSpec {
    /// `|t| (r1 + r2) < r1 r2`, the sufficient condition for the
    /// generating kernels to stay nonsingular on circles of radii
    /// `r1`, `r2`; always true for the fixed-order kernel.
    pub fn admissible(&self, r1: f64, r2: f64) -> bool {
        match self {
            KernelSpec::Al { .. } => true,
            KernelSpec::At { t, .. } | KernelSpec::Ah { t, .. } => {
                t.norm() * (r1 + r2) < r1 * r2
            }
        }
    }
}

/// Truncated coefficient series `h(s) = sum h_l s^l`; evaluated by
/// Horner strictly inside `|s| <= 1/2`.
#[derive(Clone, Debug)]
pub struct HSeries {
    coeffs: Vec<Complex64>,
}

impl HSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        HSeries { coeffs }
    }

    pub fn constant_one() -> Self {
        HSeries { coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    /// Truncated geometric series with sign `(-1)^(lambda1 - 1)`,
    /// i.e. the expansion of `(-1)^(lambda1-1) (1+s)^(-1)`.
    pub fn geometric(w: WeightPair, order: u32) -> Self {
        let lead = if (w.lambda1() + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let coeffs = (0..=order)
            .map(|l| Complex64::new(if l % 2 == 0 { lead } else { -lead }, 0.0))
            .collect();
        HSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64, ContourError> {
        let s_abs = s.norm();
        if s_abs > 0.5 {
            return Err(ContourError::TrustRegion { s_abs });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        Ok(acc)
    }
}

/// The relation between a normalizing sequence `a_l` and the series
/// coefficients `h_l` that realize it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HConvention {
    /// `h_l = (-1)^(lambda1+l-1) (lambda1+l-1)! (lambda2+l-1)! / (lambda1+lambda2+l-2)! a_l`;
    /// with this sign the transform's Taylor coefficient `l` equals `a_l RC^(l) f`.
    Corrected,
    /// Same magnitude without the sign factor; kept so the residual
    /// sign pattern of this convention can be measured.
    Printed,
}

impl HSeries {
    /// Builds the series realizing the normalizing sequence `a` under
    /// the given convention.
    pub fn from_a_sequence(a: &[f64], w: WeightPair, convention: HConvention) -> Self {
        let coeffs = a
            .iter()
            .enumerate()
            .map(|(l, &al)| {
                let ratio = crate::rc::scaling_magnitude(w, l as u32)
                    .recip()
                    .expect("scaling magnitude is nonzero")
                    .to_f64();
                let sign = match convention {
                    HConvention::Corrected => {
                        if (w.lambda1() as usize + l + 1) % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        }
                    }
                    HConvention::Printed => 1.0,
                };
                Complex64::new(sign * ratio * al, 0.0)
            })
            .collect();
        HSeries { coeffs }
    }
}

fn unit_root(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| unit_root(k, n)).collect()
}

/// Neumaier compensated summation, componentwise on re/im.
#[derive(Default)]
struct CompensatedSum {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: Complex64) {
        let t = self.sum_re + v.re;
        if self.sum_re.abs() >= v.re.abs() {
            self.c_re += (self.sum_re - t) + v.re;
        } else {
            self.c_re += (v.re - t) + self.sum_re;
        }
        self.sum_re = t;
        let t = self.sum_im + v.im;
        if self.sum_im.abs() >= v.im.abs() {
            self.c_im += (self.sum_im - t) + v.im;
        } else {
            self.c_im += (v.im - t) + self.sum_im;
        }
        self.sum_im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

/// `(1/2 pi i) closed-integral f(zeta) d zeta` over the circle, by the
/// trapezoidal rule `(radius/N) sum_k f(zeta_k) e^(i theta_k)`.
pub fn contour_integrate(
    f: impl Fn(Complex64) -> Complex64,
    c: &Contour,
) -> Result<Complex64, ContourError> {
    let mut sum = CompensatedSum::default();
    for k in 0..c.nodes {
        let w = unit_root(k, c.nodes);
        let v = f(c.center + c.radius * w);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(ContourError::NonFiniteSample { node: (k, 0) });
        }
        sum.add(v * w);
    }
    Ok(sum.value() * (c.radius / c.nodes as f64))
}

/// Coefficient of `(zeta - center)^order` in the Laurent expansion of
/// `f`, extracted as `(1/2 pi i) closed-integral f (zeta-center)^(-order-1)`.
pub fn cauchy_coefficient(
    f: impl Fn(Complex64) -> Complex64,
    center: Complex64,
    order: u32,
    c: &Contour,
) -> Result<Complex64, ContourError> {
    contour_integrate(
        |zeta| f(zeta) * (zeta - center).powi(-(order as i32) - 1),
        c,
    )
}

fn pole_threshold(z: Complex64) -> f64 {
    1e-12 * (1.0 + z.norm())
}

fn check_poles(
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
) -> Result<(Complex64, Complex64), ContourError> {
    let d1 = zeta1 - z;
    let d2 = zeta2 - z;
    let tol = pole_threshold(z);
    if d1.norm() < tol {
        return Err(ContourError::PoleHit { which: 1, distance: d1.norm() });
    }
    if d2.norm() < tol {
        return Err(ContourError::PoleHit { which: 2, distance: d2.norm() });
    }
    Ok((d1, d2))
}

/// Fixed-order kernel
/// `(z1-z2)^(l1+l2+l-2) / ((z1-z)^(l2+l) (z2-z)^(l1+l))`.
pub fn kernel_al(
    w: WeightPair,
    ell: u32,
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
) -> Result<Complex64, ContourError> {
    let (d1, d2) = check_poles(zeta1, zeta2, z)?;
    let p = (w.lambda1() + w.lambda2() + ell - 2) as i32;
    let num = (zeta1 - zeta2).powi(p);
    let den = d1.powi((w.lambda2() + ell) as i32) * d2.powi((w.lambda1() + ell) as i32);
    Ok(num / den)
}

/// Generating kernel
/// `(z1-z2)^(l1+l2-2) (z1-z)^(1-l2) (z-z2)^(1-l1) / ((z1-z)(z2-z) + t(z1-z2))`.
pub fn kernel_a(
    w: WeightPair,
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
    t: Complex64,
) -> Result<Complex64, ContourError> {
    let (d1, d2) = check_poles(zeta1, zeta2, z)?;
    let diff = zeta1 - zeta2;
    let den = d1 * d2 + t * diff;
    let scale = d1.norm() * d2.norm() + t.norm() * diff.norm();
    if den.norm() < 1e-12 * scale || scale == 0.0 {
        return Err(ContourError::SmallDenominator { magnitude: den.norm(), scale });
    }
    let num = diff.powi((w.lambda1() + w.lambda2() - 2) as i32)
        * d1.powi(1 - w.lambda2() as i32)
        * (z - zeta2).powi(1 - w.lambda1() as i32);
    Ok(num / den)
}

/// Series kernel
/// `(z1-z2)^(l1+l2-2) / ((z1-z)^l2 (z2-z)^l1) h(t phi)` with
/// `phi = (z1-z2) / ((z1-z)(z2-z))`.
pub fn kernel_ah(
    w: WeightPair,
    h: &HSeries,
    zeta1: Complex64,
    zeta2: Complex64,
    z: Complex64,
    t: Complex64,
) -> Result<Complex64, ContourError> {
    let (d1, d2) = check_poles(zeta1, zeta2, z)?;
    let diff = zeta1 - zeta2;
    let phi = diff / (d1 * d2);
    let hval = h.eval(t * phi)?;
    let prefactor =
        diff.powi((w.lambda1() + w.lambda2() - 2) as i32)
            / (d1.powi(w.lambda2() as i32) * d2.powi(w.lambda1() as i32));
    Ok(prefactor * hval)
}

/// Adaptive node-doubling policy for the double-contour transforms.
#[derive(Clone, Copy, Debug)]
pub struct QuadParams {
    pub start_nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
    /// Node count of the outer circle used for Taylor extraction in `t`.
    pub t_nodes: usize,
}

impl Default for QuadParams {
    fn default() -> Self {
        QuadParams { start_nodes: 64, max_nodes: 8192, rel_tol: 1e-11, t_nodes: 32 }
    }
}

impl QuadParams {
    fn validate(&self) -> Result<(), ContourError> {
        if self.start_nodes < 16
            || !self.start_nodes.is_power_of_two()
            || !self.t_nodes.is_power_of_two()
            || self.max_nodes < 2 * self.start_nodes
        {
            return Err(ContourError::InvalidContour(format!(
                "bad quadrature parameters: {self:?}"
            )));
        }
        Ok(())
    }
}

/// One converged double-contour value with its diagnostics.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub nodes: usize,
    pub est_error: f64,
}

fn double_contour_once(
    kernel: &impl Fn(Complex64, Complex64) -> Result<Complex64, ContourError>,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    r1: f64,
    r2: f64,
    n: usize,
) -> Result<Complex64, ContourError> {
    let roots = unit_roots(n);
    let mut sum = CompensatedSum::default();
    for (k, w1) in roots.iter().enumerate() {
        let zeta1 = z + r1 * w1;
        for (m, w2) in roots.iter().enumerate() {
            let zeta2 = z + r2 * w2;
            let fv = f(zeta1, zeta2);
            if !fv.re.is_finite() || !fv.im.is_finite() {
                return Err(ContourError::NonFiniteSample { node: (k, m) });
            }
            let kv = kernel(zeta1, zeta2)?;
            sum.add(kv * fv * w1 * w2);
        }
    }
    Ok(sum.value() * Complex64::new(r1 * r2 / (n as f64 * n as f64), 0.0))
}

fn adaptive_double(
    kernel: &impl Fn(Complex64, Complex64) -> Result<Complex64, ContourError>,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<Quadrature, ContourError> {
    params.validate()?;
    let mut n = params.start_nodes;
    let mut prev = double_contour_once(kernel, f, z, r1, r2, n)?;
    let mut last_delta = f64::INFINITY;
    while 2 * n <= params.max_nodes {
        n *= 2;
        let next = double_contour_once(kernel, f, z, r1, r2, n)?;
        last_delta = (next - prev).norm();
        if last_delta <= params.rel_tol * (1.0 + next.norm()) {
            return Ok(Quadrature { value: next, nodes: n, est_error: last_delta });
        }
        prev = next;
    }
    Err(ContourError::NonConvergence { nodes: n, last_delta })
}

/// The fixed-order transform: iterated contour integral of
/// `kernel_al * f` over circles of radii `r1`, `r2` about `z`.
pub fn transform_tl(
    w: WeightPair,
    ell: u32,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<Quadrature, ContourError> {
    adaptive_double(&|z1, z2| kernel_al(w, ell, z1, z2, z), f, z, r1, r2, params)
}

/// The generating transform at parameter `t`; rejects inadmissible
/// `(t, r1, r2)` before evaluating anything.
pub fn transform_t(
    w: WeightPair,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    t: Complex64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<Quadrature, ContourError> {
    let lhs = t.norm() * (r1 + r2);
    let rhs = r1 * r2;
    if lhs >= rhs {
        return Err(ContourError::Admissibility { lhs, rhs });
    }
    adaptive_double(&|z1, z2| kernel_a(w, z1, z2, z, t), f, z, r1, r2, params)
}

/// The series transform for a truncated `h`; requires the trust
/// condition `|t| (r1 + r2) <= r1 r2 / 2` on top of admissibility.
pub fn transform_th(
    w: WeightPair,
    h: &HSeries,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    t: Complex64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<Quadrature, ContourError> {
    let bound = t.norm() * (r1 + r2) / (r1 * r2);
    if bound > 0.5 {
        return Err(ContourError::TrustRegion { s_abs: bound });
    }
    adaptive_double(&|z1, z2| kernel_ah(w, h, z1, z2, z, t), f, z, r1, r2, params)
}

/// Taylor coefficients in `t` of a transform, extracted by Cauchy
/// coefficients over a third circle of radius `rho_t` in the `t` plane.
#[derive(Clone, Debug)]
pub struct TaylorCoeffs {
    pub coeffs: Vec<Complex64>,
    pub nodes: usize,
    pub est_error: f64,
}

fn taylor_from_samples(
    transform: &impl Fn(Complex64) -> Result<Quadrature, ContourError>,
    order: u32,
    rho_t: f64,
    t_nodes: usize,
) -> Result<TaylorCoeffs, ContourError> {
    let roots = unit_roots(t_nodes);
    let mut samples = Vec::with_capacity(t_nodes);
    let mut nodes = 0;
    let mut inner_err: f64 = 0.0;
    for w in &roots {
        let q = transform(rho_t * w)?;
        nodes = nodes.max(q.nodes);
        inner_err = inner_err.max(q.est_error);
        samples.push(q.value);
    }
    let mut coeffs = Vec::with_capacity(order as usize + 1);
    let mut rho_pow = 1.0;
    for k in 0..=order as usize {
        let mut sum = CompensatedSum::default();
        for (m, v) in samples.iter().enumerate() {
            sum.add(v * roots[(k * m) % t_nodes].conj());
        }
        coeffs.push(sum.value() / Complex64::new(t_nodes as f64 * rho_pow, 0.0));
        rho_pow *= rho_t;
    }
    Ok(TaylorCoeffs {
        coeffs,
        nodes,
        est_error: inner_err / rho_t.powi(order as i32).min(1.0),
    })
}

/// Coefficients of `t^0 .. t^order` of `t -> transform_t(...)`.
pub fn taylor_in_t(
    w: WeightPair,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    order: u32,
    rho_t: f64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<TaylorCoeffs, ContourError> {
    let lhs = rho_t * (r1 + r2);
    let rhs = r1 * r2;
    if lhs >= rhs {
        return Err(ContourError::Admissibility { lhs, rhs });
    }
    taylor_from_samples(
        &|t| transform_t(w, f, z, t, r1, r2, params),
        order,
        rho_t,
        params.t_nodes,
    )
}

/// Coefficients of `t^0 .. t^order` of `t -> transform_th(...)`.
pub fn taylor_th(
    w: WeightPair,
    h: &HSeries,
    f: &impl Fn(Complex64, Complex64) -> Complex64,
    z: Complex64,
    order: u32,
    rho_t: f64,
    r1: f64,
    r2: f64,
    params: &QuadParams,
) -> Result<TaylorCoeffs, ContourError> {
    let bound = rho_t * (r1 + r2) / (r1 * r2);
    if bound > 0.5 {
        return Err(ContourError::TrustRegion { s_abs: bound });
    }
    taylor_from_samples(
        &|t| transform_th(w, h, f, z, t, r1, r2, params),
        order,
        rho_t,
        params.t_nodes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussianRational;
    use crate::poly::BivariatePoly;
    use crate::rc::{rc_apply, scaling_constant};

    fn w(l1: u32, l2: u32) -> WeightPair {
        WeightPair::new(l1, l2).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    #[test]
    fn contour_validation() {
        assert!(Contour::new(c(0.0, 0.0), 1.0, 64).is_ok());
        assert!(Contour::new(c(0.0, 0.0), 0.0, 64).is_err());
        assert!(Contour::new(c(0.0, 0.0), 1.0, 48).is_err());
        assert!(Contour::new(c(0.0, 0.0), 1.0, 8).is_err());
    }

    #[test]
    fn resolvent_integrates_to_one() {
        let z = c(0.3, -0.2);
        let contour = Contour::new(z, 0.9, 64).unwrap();
        let v = contour_integrate(|zeta| 1.0 / (zeta - z), &contour).unwrap();
        assert!((v - ONE).norm() < 1e-13, "{v}");

        let v = contour_integrate(|_| ONE, &contour).unwrap();
        assert!(v.norm() < 1e-14);

        // d/dzeta zeta^2 at 1 by the Cauchy formula
        let contour = Contour::new(ONE, 0.7, 64).unwrap();
        let v = contour_integrate(|zeta| zeta * zeta / ((zeta - ONE) * (zeta - ONE)), &contour)
            .unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-12, "{v}");
    }

    #[test]
    fn non_finite_samples_are_reported() {
        let contour = Contour::new(c(0.0, 0.0), 1.0, 16).unwrap();
        let err = contour_integrate(|zeta| 1.0 / (zeta - contour.node(3)), &contour).unwrap_err();
        match err {
            ContourError::NonFiniteSample { node } => assert_eq!(node.0, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cauchy_coefficients_of_exp() {
        let contour = Contour::new(c(0.0, 0.0), 1.0, 64).unwrap();
        let v = cauchy_coefficient(|z| z.exp(), c(0.0, 0.0), 3, &contour).unwrap();
        assert!((v - c(1.0 / 6.0, 0.0)).norm() < 1e-12, "{v}");

        let five = c(5.0, 0.0);
        let v = cauchy_coefficient(|_| five, c(0.0, 0.0), 0, &contour).unwrap();
        assert!((v - five).norm() < 1e-13);
        let v = cauchy_coefficient(|_| five, c(0.0, 0.0), 2, &contour).unwrap();
        assert!(v.norm() < 1e-13);
    }

    #[test]
    fn kernel_al_fixtures() {
        let v = kernel_al(w(1, 1), 0, c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v - c(1.0 / 6.0, 0.0)).norm() < 1e-15);

        let v = kernel_al(w(1, 1), 1, c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v - c(-1.0 / 36.0, 0.0)).norm() < 1e-15);

        // coincident outer points kill the kernel once the numerator power is positive
        let v = kernel_al(w(2, 1), 0, c(2.0, 1.0), c(2.0, 1.0), c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(0.0, 0.0));

        // pole hit is an error, not an infinity
        assert!(matches!(
            kernel_al(w(1, 1), 0, c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)),
            Err(ContourError::PoleHit { which: 1, .. })
        ));
    }

    #[test]
    fn kernel_a_fixtures() {
        // t = 0 reduces to (-1)^(lambda1-1) times the order-zero kernel
        for (l1, l2) in [(1, 1), (2, 3), (3, 2), (4, 1)] {
            let (z1, z2, z) = (c(1.3, 0.4), c(-0.8, 1.1), c(0.1, 0.2));
            let a = kernel_a(w(l1, l2), z1, z2, z, c(0.0, 0.0)).unwrap();
            let al = kernel_al(w(l1, l2), 0, z1, z2, z).unwrap();
            let sign = if (l1 + 1) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - sign * al).norm() < 1e-12 * al.norm(), "{l1},{l2}");
        }

        // weight (1,1) is the bare resolvent-style kernel
        let (z1, z2, z, t) = (c(2.0, 0.0), c(0.0, 3.0), c(0.5, 0.5), c(0.1, 0.0));
        let v = kernel_a(w(1, 1), z1, z2, z, t).unwrap();
        let expected = 1.0 / ((z1 - z) * (z2 - z) + t * (z1 - z2));
        assert!((v - expected).norm() < 1e-15);

        // constructed singular input
        assert!(matches!(
            kernel_a(w(1, 1), c(2.0, 0.0), c(-2.0, 0.0), c(0.0, 0.0), ONE),
            Err(ContourError::SmallDenominator { .. })
        ));
    }

    #[test]
    fn kernel_ah_fixtures() {
        let (z1, z2, z) = (c(1.2, 0.3), c(-0.9, 0.8), c(0.0, 0.1));
        // constant h reduces to the order-zero kernel
        let v = kernel_ah(w(2, 3), &HSeries::constant_one(), z1, z2, z, c(0.07, 0.02)).unwrap();
        let al = kernel_al(w(2, 3), 0, z1, z2, z).unwrap();
        assert!((v - al).norm() < 1e-13 * al.norm());

        // truncated geometric h matches the generating kernel within
        // |t phi|^(L+1) / (1 - |t phi|)
        let t = c(0.12, -0.05);
        for (l1, l2) in [(1, 1), (2, 1), (2, 3)] {
            let order = 8;
            let h = HSeries::geometric(w(l1, l2), order);
            let ah = kernel_ah(w(l1, l2), &h, z1, z2, z, t).unwrap();
            let a = kernel_a(w(l1, l2), z1, z2, z, t).unwrap();
            let phi = (z1 - z2) / ((z1 - z) * (z2 - z));
            let q = (t * phi).norm();
            let prefactor = kernel_al(w(l1, l2), 0, z1, z2, z).unwrap().norm();
            let bound = prefactor * q.powi(order as i32 + 1) / (1.0 - q);
            assert!(
                (ah - a).norm() <= bound * 1.0001 + 1e-14 * prefactor,
                "{l1},{l2}"
            );
        }

        // t = 0 keeps only h_0
        let h = HSeries::new(vec![c(2.5, 0.0), c(9.0, 0.0)]);
        let v = kernel_ah(w(2, 3), &h, z1, z2, z, c(0.0, 0.0)).unwrap();
        assert!((v - 2.5 * al).norm() < 1e-13 * al.norm());

        // trust region is enforced
        let far_t = c(2.0, 0.0);
        assert!(matches!(
            kernel_ah(w(1, 1), &HSeries::constant_one(), z1, z2, z, far_t),
            Err(ContourError::TrustRegion { .. })
        ));
    }

    #[test]
    fn transform_tl_fixtures() {
        let params = QuadParams::default();
        let constant = |_: Complex64, _: Complex64| ONE;
        for z in [c(0.0, 0.0), c(0.4, -0.3)] {
            let q = transform_tl(w(1, 1), 0, &constant, z, 1.0, 0.8, &params).unwrap();
            assert!((q.value - ONE).norm() < 1e-12, "{}", q.value);
        }

        // order 1 on zeta1^2: -2z
        let f = |z1: Complex64, _: Complex64| z1 * z1;
        let z = c(0.3, 0.5);
        let q = transform_tl(w(1, 1), 1, &f, z, 1.0, 1.0, &params).unwrap();
        assert!((q.value - (-2.0 * z)).norm() < 1e-10, "{}", q.value);

        // order 2 on zeta1^2 zeta2^2: -6 z^2
        let f = |z1: Complex64, z2: Complex64| (z1 * z1) * (z2 * z2);
        let q = transform_tl(w(1, 1), 2, &f, z, 1.0, 1.0, &params).unwrap();
        assert!((q.value - (-6.0 * z * z)).norm() < 1e-10, "{}", q.value);
    }

    #[test]
    fn transform_tl_is_contour_independent() {
        let params = QuadParams::default();
        let f = |z1: Complex64, z2: Complex64| z1 * z1 * z2 + 2.0 * z2 * z2;
        let z = c(0.2, -0.6);
        let a = transform_tl(w(2, 3), 2, &f, z, 1.0, 0.9, &params).unwrap();
        let b = transform_tl(w(2, 3), 2, &f, z, 0.5, 0.6, &params).unwrap();
        assert!((a.value - b.value).norm() <= 1e-10 * (1.0 + a.value.norm()));
    }

    #[test]
    fn transform_matches_exact_bracket() {
        // quadrature against the exact algebraic path, one spot check
        let params = QuadParams::default();
        let f_exact = BivariatePoly::from_terms(vec![
            (3, 1, GaussianRational::from_parts(2, 1, 0, 1)),
            (1, 2, GaussianRational::from_parts(-1, 3, 1, 2)),
        ]);
        let f64poly = f_exact.to_complex();
        let f = |z1, z2| f64poly.evaluate(&z1, &z2);
        for (l1, l2, ell) in [(1u32, 1u32, 1u32), (2, 1, 2), (3, 2, 0), (2, 2, 3)] {
            let wp = w(l1, l2);
            let z = c(0.35, 0.15);
            let q = transform_tl(wp, ell, &f, z, 1.0, 1.0, &params).unwrap();
            let exact = rc_apply(wp, ell, &f_exact)
                .map(GaussianRational::to_complex64)
                .evaluate(&z);
            let expected = scaling_constant(wp, ell).to_f64() * exact;
            assert!(
                (q.value - expected).norm() <= 1e-9 * (1.0 + expected.norm()),
                "l1={l1} l2={l2} ell={ell}: {} vs {expected}",
                q.value
            );
        }
    }

    #[test]
    fn transform_t_fixtures() {
        let params = QuadParams::default();
        // t = 0 equals the sign-adjusted order-zero transform
        let f = |z1: Complex64, z2: Complex64| z1 * z2 * z2 + 1.0;
        let z = c(0.1, 0.4);
        for (l1, l2) in [(1, 1), (2, 1), (2, 3)] {
            let a = transform_t(w(l1, l2), &f, z, c(0.0, 0.0), 1.0, 1.0, &params).unwrap();
            let b = transform_tl(w(l1, l2), 0, &f, z, 1.0, 1.0, &params).unwrap();
            let sign = if (l1 + 1) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a.value - sign * b.value).norm() < 1e-10 * (1.0 + b.value.norm()));
        }

        // constant f keeps only the order-zero term
        let constant = |_: Complex64, _: Complex64| ONE;
        let q = transform_t(w(1, 1), &constant, z, c(0.2, 0.1), 1.0, 1.0, &params).unwrap();
        assert!((q.value - ONE).norm() < 1e-10);

        // quadratic f truncates after order 2: value is the finite sum
        // sum_l kappa_l t^l RC^(l) f(z) computed from the exact path
        let f = |z1: Complex64, _: Complex64| z1 * z1;
        let z = c(0.0, 1.0);
        let t = c(0.1, 0.0);
        let q = transform_t(w(1, 1), &f, z, t, 1.0, 1.0, &params).unwrap();
        let expected = z * z + t * (2.0 * z) + t * t * ONE; // 1, 2z, 2 with weights 1, 1, 1/2
        assert!((q.value - expected).norm() < 1e-9, "{} vs {expected}", q.value);

        // admissibility is rejected before evaluation
        assert!(matches!(
            transform_t(w(1, 1), &constant, z, c(0.6, 0.0), 1.0, 1.0, &params),
            Err(ContourError::Admissibility { .. })
        ));
    }

    #[test]
    fn taylor_in_t_fixtures() {
        let params = QuadParams::default();
        let f = |z1: Complex64, _: Complex64| z1 * z1;
        let z = c(0.25, -0.4);
        let taylor = taylor_in_t(w(1, 1), &f, z, 5, 0.2, 1.0, 1.0, &params).unwrap();

        // coefficient 0 is the transform at t = 0
        let at0 = transform_t(w(1, 1), &f, z, c(0.0, 0.0), 1.0, 1.0, &params).unwrap();
        assert!((taylor.coeffs[0] - at0.value).norm() < 1e-10);

        // coefficient 1 equals RC^(1) f(z) = 2z for these weights
        assert!((taylor.coeffs[1] - 2.0 * z).norm() < 1e-8, "{}", taylor.coeffs[1]);

        // coefficients beyond the total degree vanish
        for k in 3..=5 {
            assert!(taylor.coeffs[k].norm() < 1e-8, "k={k}: {}", taylor.coeffs[k]);
        }
    }

    #[test]
    fn transform_th_fixtures() {
        let params = QuadParams::default();
        let f = |z1: Complex64, z2: Complex64| z1 * z1 + 0.5 * z2;
        let z = c(0.3, 0.2);
        let t = c(0.08, 0.03);

        // geometric h reproduces the generating transform up to truncation
        for (l1, l2) in [(1, 1), (2, 1), (2, 2)] {
            let h = HSeries::geometric(w(l1, l2), 40);
            let a = transform_th(w(l1, l2), &h, &f, z, t, 1.0, 1.0, &params).unwrap();
            let b = transform_t(w(l1, l2), &f, z, t, 1.0, 1.0, &params).unwrap();
            assert!(
                (a.value - b.value).norm() <= 1e-9 * (1.0 + b.value.norm()),
                "{l1},{l2}: {} vs {}",
                a.value,
                b.value
            );
        }

        // single-coefficient h picks out the order-zero transform, independent of t
        let h = HSeries::constant_one();
        let a = transform_th(w(2, 1), &h, &f, z, t, 1.0, 1.0, &params).unwrap();
        let b = transform_tl(w(2, 1), 0, &f, z, 1.0, 1.0, &params).unwrap();
        assert!((a.value - b.value).norm() < 1e-10 * (1.0 + b.value.norm()));

        // zero input gives zero
        let zero = |_: Complex64, _: Complex64| Complex64::new(0.0, 0.0);
        let a = transform_th(w(2, 1), &h, &zero, z, t, 1.0, 1.0, &params).unwrap();
        assert_eq!(a.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn series_expansion_truncation_decays_geometrically() {
        // |A - sum_{l<=L} (-1)^(lambda1+l-1) t^l A^(l)| shrinks like the
        // predicted ratio
        let (z1, z2, z) = (c(1.1, 0.2), c(-0.7, 0.9), c(0.05, -0.1));
        let t = c(0.21, 0.08);
        for (l1, l2) in [(1u32, 1u32), (2, 3)] {
            let wp = w(l1, l2);
            let a = kernel_a(wp, z1, z2, z, t).unwrap();
            let partial = |top: u32| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut tpow = ONE;
                for ell in 0..=top {
                    let sign = if (l1 + ell + 1) % 2 == 0 { 1.0 } else { -1.0 };
                    acc += sign * tpow * kernel_al(wp, ell, z1, z2, z).unwrap();
                    tpow *= t;
                }
                acc
            };
            let ratio = (t * (z1 - z2)).norm() / ((z1 - z).norm() * (z2 - z).norm());
            assert!(ratio < 1.0);
            let e1 = (a - partial(5)).norm();
            let e2 = (a - partial(15)).norm();
            let measured = (e2 / e1).powf(1.0 / 10.0);
            assert!(
                measured <= 2.0 * ratio && measured >= ratio / 2.0,
                "measured {measured} vs predicted {ratio}"
            );
        }
    }

    #[test]
    fn domain_membership() {
        // whole plane never restricts
        assert!(in_ud(c(100.0, -3.0), c(50.0, 0.0), &DomainDescriptor::WholePlane).unwrap());

        // upper half plane: threshold at 2|t| = Im z
        let half = DomainDescriptor::UpperHalfPlane;
        assert!(in_ud(c(0.0, 2.0), c(0.9, 0.0), &half).unwrap());
        assert!(!in_ud(c(0.0, 2.0), c(1.1, 0.0), &half).unwrap());
        assert!(in_ud(c(0.0, 2.0), c(0.0, -0.9), &half).unwrap());
        assert!(matches!(
            in_ud(c(0.0, -1.0), c(0.1, 0.0), &half),
            Err(ContourError::OutsideDomain(_))
        ));

        // unit disk at the center: threshold |t| = 1/2
        let disk = DomainDescriptor::Disk { center: c(0.0, 0.0), radius: 1.0 };
        assert!(in_ud(c(0.0, 0.0), c(0.4, 0.0), &disk).unwrap());
        assert!(!in_ud(c(0.0, 0.0), c(0.6, 0.0), &disk).unwrap());

        assert!((default_radius(c(0.0, 2.0), &half).unwrap() - 1.6).abs() < 1e-15);
        assert_eq!(default_radius(c(3.0, 4.0), &DomainDescriptor::WholePlane).unwrap(), 1.0);
    }

    #[test]
    fn kernel_spec_admissibility() {
        let spec = KernelSpec::At { weights: w(1, 1), t: c(0.3, 0.0) };
        assert!(spec.admissible(1.0, 1.0));
        assert!(!spec.admissible(0.5, 0.5));
        let spec = KernelSpec::Al { weights: w(1, 1), ell: 3 };
        assert!(spec.admissible(0.1, 0.1));
    }
}
