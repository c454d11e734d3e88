//! Continuous distributions and parametric service-time models.
//!
//! [`ContinuousDistribution`] covers the interarrival and service laws the
//! engine knows how to sample, evaluate, and differentiate. Sampling is
//! normatively inverse-c.d.f.: one uniform in, one draw out. That convention
//! is what makes common-random-number coupling across nearby `theta` values
//! well defined ("same uniforms, different theta").
//!
//! [`ServiceModel`] is the first customer's service law as a function of
//! `theta`, carrying pathwise derivatives of the draw with respect to
//! `theta` up to its declared smoothness order. Derivatives above that order
//! are reported as absent rather than zero, so a scenario that requests more
//! smoothness than it asserted fails loudly instead of silently producing
//! biased numbers.

use std::fmt;
use std::sync::Arc;

use crate::error::{SimError, Violation};
use crate::real::Real;
use crate::rng::RandomStream;

fn invalid(code: &'static str, message: String) -> SimError {
    SimError::Validation(vec![Violation { code, message }])
}

/// A continuous (or degenerate) positive-valued law.
///
/// `Uniform` bounds may dip below zero only when the distribution serves as
/// the base of a location-family service model (the shift restores
/// positivity); scenario validation enforces nonnegative support wherever the
/// law is used directly for interarrival or service times.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuousDistribution<T: Real> {
    Exponential { rate: T },
    Uniform { lower: T, upper: T },
    /// Uniform on `(center - half_width, center + half_width)`; requires
    /// `half_width <= center` so the support stays nonnegative.
    UniformLocation { center: T, half_width: T },
    /// Point mass. Has no density; capability checks keep it away from any
    /// operation that needs one.
    Deterministic { value: T },
}

impl<T: Real> ContinuousDistribution<T> {
    pub fn exponential(rate: T) -> Result<Self, SimError> {
        if !rate.is_finite() || rate <= T::zero() {
            return Err(invalid(
                "positivity",
                format!("exponential rate must be finite and positive, got {rate}"),
            ));
        }
        Ok(Self::Exponential { rate })
    }

    pub fn uniform(lower: T, upper: T) -> Result<Self, SimError> {
        if !lower.is_finite() || !upper.is_finite() || lower >= upper {
            return Err(invalid(
                "positivity",
                format!("uniform bounds must be finite with lower < upper, got ({lower}, {upper})"),
            ));
        }
        Ok(Self::Uniform { lower, upper })
    }

    pub fn uniform_location(center: T, half_width: T) -> Result<Self, SimError> {
        if !center.is_finite() || !half_width.is_finite() || half_width <= T::zero() {
            return Err(invalid(
                "positivity",
                format!("uniform_location requires a finite center and positive half_width, got ({center}, {half_width})"),
            ));
        }
        if half_width > center {
            return Err(invalid(
                "support",
                format!("uniform_location requires half_width <= center so the support stays nonnegative, got ({center}, {half_width})"),
            ));
        }
        Ok(Self::UniformLocation { center, half_width })
    }

    pub fn deterministic(value: T) -> Result<Self, SimError> {
        if !value.is_finite() || value <= T::zero() {
            return Err(invalid(
                "positivity",
                format!("deterministic value must be finite and positive, got {value}"),
            ));
        }
        Ok(Self::Deterministic { value })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Exponential { .. } => "exponential",
            Self::Uniform { .. } => "uniform",
            Self::UniformLocation { .. } => "uniform_location",
            Self::Deterministic { .. } => "deterministic",
        }
    }

    /// Support as `(lower, upper)`; the exponential upper end is `+inf`.
    pub fn support(&self) -> (T, T) {
        match *self {
            Self::Exponential { .. } => (T::zero(), T::infinity()),
            Self::Uniform { lower, upper } => (lower, upper),
            Self::UniformLocation { center, half_width } => {
                (center - half_width, center + half_width)
            }
            Self::Deterministic { value } => (value, value),
        }
    }

    pub fn mean(&self) -> T {
        match *self {
            Self::Exponential { rate } => rate.recip(),
            Self::Uniform { lower, upper } => {
                (lower + upper) / T::from_f64_lossy(2.0)
            }
            Self::UniformLocation { center, .. } => center,
            Self::Deterministic { value } => value,
        }
    }

    /// True when the law has a density at all (everything but point masses).
    pub fn has_density(&self) -> bool {
        !matches!(self, Self::Deterministic { .. })
    }

    /// True when the density is almost-surely continuous on `(0, inf)`.
    ///
    /// This is the structural condition (Assumption 4) gating third-order
    /// estimation: it holds for the exponential family and fails for uniform
    /// laws, whose density jumps at the support edges.
    pub fn has_continuous_density_on_positive_line(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }

    /// True when [`ContinuousDistribution::pdf_prime`] is available.
    pub fn has_density_derivative(&self) -> bool {
        matches!(self, Self::Exponential { .. })
    }

    /// Density at `x`; zero outside the support. Point masses report zero
    /// everywhere.
    pub fn pdf(&self, x: T) -> T {
        match *self {
            Self::Exponential { rate } => {
                if x >= T::zero() {
                    rate * (-rate * x).exp()
                } else {
                    T::zero()
                }
            }
            Self::Uniform { lower, upper } => {
                if x >= lower && x <= upper {
                    (upper - lower).recip()
                } else {
                    T::zero()
                }
            }
            Self::UniformLocation { center, half_width } => {
                if x >= center - half_width && x <= center + half_width {
                    (half_width + half_width).recip()
                } else {
                    T::zero()
                }
            }
            Self::Deterministic { .. } => T::zero(),
        }
    }

    /// Density derivative dg/dx at `x`.
    ///
    /// Fails with a capability error for families without one; for the
    /// estimators this signals that third-order estimation (which needs
    /// Assumption 4) is invalid under this interarrival law.
    pub fn pdf_prime(&self, x: T) -> Result<T, SimError> {
        match *self {
            Self::Exponential { rate } => {
                if x >= T::zero() {
                    Ok(-rate * rate * (-rate * x).exp())
                } else {
                    Ok(T::zero())
                }
            }
            _ => Err(SimError::Capability(format!(
                "family '{}' has no density derivative; its density is not a.s. continuous on the positive real line (Assumption 4), so third-order estimation is unavailable",
                self.family_name()
            ))),
        }
    }

    pub fn cdf(&self, x: T) -> T {
        match *self {
            Self::Exponential { rate } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    T::one() - (-rate * x).exp()
                }
            }
            Self::Uniform { lower, upper } => {
                ((x - lower) / (upper - lower)).max(T::zero()).min(T::one())
            }
            Self::UniformLocation { center, half_width } => {
                ((x - (center - half_width)) / (half_width + half_width))
                    .max(T::zero())
                    .min(T::one())
            }
            Self::Deterministic { value } => {
                if x < value {
                    T::zero()
                } else {
                    T::one()
                }
            }
        }
    }

    /// Inverse c.d.f. at `u` in (0, 1) — the normative sampling transform.
    pub fn quantile(&self, u: T) -> T {
        match *self {
            Self::Exponential { rate } => -(T::one() - u).ln() / rate,
            Self::Uniform { lower, upper } => lower + u * (upper - lower),
            Self::UniformLocation { center, half_width } => {
                center - half_width + u * (half_width + half_width)
            }
            Self::Deterministic { value } => value,
        }
    }

    /// Draw from the law. Point masses return their constant without
    /// consuming randomness, so stream consumption per customer is fixed.
    pub fn sample(&self, stream: &mut RandomStream) -> T {
        match self {
            Self::Deterministic { value } => *value,
            _ => self.quantile(stream.uniform()),
        }
    }
}

type Surface<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
type SupportFn<T> = Arc<dyn Fn(T) -> (T, T) + Send + Sync>;

/// User-supplied service law given by its c.d.f. `F(x; theta)` and partials.
///
/// The first pathwise derivative comes from the implicit-function identity
/// `S' = -(dF/dtheta)/(dF/dx)` evaluated at the draw; higher pathwise
/// derivatives cannot be recovered from `F` alone and must be supplied
/// explicitly as functions of `(s, theta)`.
#[derive(Clone)]
pub struct CustomService<T: Real> {
    cdf: Surface<T>,
    cdf_dtheta: Surface<T>,
    cdf_dx: Surface<T>,
    d2: Option<Surface<T>>,
    d3: Option<Surface<T>>,
    support: SupportFn<T>,
    theta_region: (T, T),
}

impl<T: Real> CustomService<T> {
    pub fn new(
        cdf: impl Fn(T, T) -> T + Send + Sync + 'static,
        cdf_dtheta: impl Fn(T, T) -> T + Send + Sync + 'static,
        cdf_dx: impl Fn(T, T) -> T + Send + Sync + 'static,
        support: impl Fn(T) -> (T, T) + Send + Sync + 'static,
    ) -> Self {
        Self {
            cdf: Arc::new(cdf),
            cdf_dtheta: Arc::new(cdf_dtheta),
            cdf_dx: Arc::new(cdf_dx),
            d2: None,
            d3: None,
            support: Arc::new(support),
            theta_region: (T::zero(), T::infinity()),
        }
    }

    /// Second pathwise derivative of the draw, as a function of `(s, theta)`.
    pub fn with_d2(mut self, d2: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    /// Third pathwise derivative of the draw, as a function of `(s, theta)`.
    pub fn with_d3(mut self, d3: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        self.d3 = Some(Arc::new(d3));
        self
    }

    pub fn with_theta_region(mut self, lower: T, upper: T) -> Self {
        self.theta_region = (lower, upper);
        self
    }
}

impl<T: Real> fmt::Debug for CustomService<T> {
    fmt_custom_debug!();
}

macro_rules! fmt_custom_debug {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.debug_struct("CustomService")
                .field("d2", &self.d2.is_some())
                .field("d3", &self.d3.is_some())
                .field("theta_region", &"(..)")
                .finish()
        }
    };
}
use fmt_custom_debug;

/// Family of the first customer's service-time model.
#[derive(Debug, Clone)]
pub enum ServiceFamily<T: Real> {
    /// `S = theta + Z` for a theta-independent base `Z`.
    Location(ContinuousDistribution<T>),
    /// `S = theta * Z` for a theta-independent unit base `Z`.
    Scale(ContinuousDistribution<T>),
    /// `S = theta` exactly.
    DeterministicTheta,
    Custom(CustomService<T>),
}

/// The first customer's service-time law as a function of `theta`.
#[derive(Debug, Clone)]
pub struct ServiceModel<T: Real> {
    family: ServiceFamily<T>,
    theta: T,
    smoothness_order: u8,
}

/// Draw plus pathwise derivatives of the draw with respect to `theta`.
///
/// `None` means "not asserted by the model's smoothness order", not zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleWithDerivatives<T: Real> {
    pub value: T,
    pub d1: Option<T>,
    pub d2: Option<T>,
    pub d3: Option<T>,
}

impl<T: Real> SampleWithDerivatives<T> {
    /// A draw whose law does not depend on `theta` (customers after the
    /// first): every pathwise derivative is identically zero.
    pub fn theta_independent(value: T) -> Self {
        Self {
            value,
            d1: Some(T::zero()),
            d2: Some(T::zero()),
            d3: Some(T::zero()),
        }
    }

    pub fn d1_or_err(&self) -> Result<T, SimError> {
        self.d1.ok_or_else(|| {
            SimError::Smoothness(
                "first pathwise service derivative unavailable (Assumption 2 requires a.e. differentiability in theta)".into(),
            )
        })
    }

    pub fn d2_or_err(&self) -> Result<T, SimError> {
        self.d2.ok_or_else(|| {
            SimError::Smoothness(
                "second pathwise service derivative unavailable: the model does not assert Assumption 2' (twice continuously differentiable in theta)".into(),
            )
        })
    }

    pub fn d3_or_err(&self) -> Result<T, SimError> {
        self.d3.ok_or_else(|| {
            SimError::Smoothness(
                "third pathwise service derivative unavailable: the model does not assert Assumption 2'' (thrice continuously differentiable in theta)".into(),
            )
        })
    }
}

impl<T: Real> ServiceModel<T> {
    fn validated(family: ServiceFamily<T>, theta: T, smoothness_order: u8) -> Result<Self, SimError> {
        if !theta.is_finite() || theta <= T::zero() {
            return Err(invalid(
                "positivity",
                format!("theta must be finite and positive, got {theta}"),
            ));
        }
        if !(1..=3).contains(&smoothness_order) {
            return Err(invalid(
                "smoothness-order",
                format!("smoothness_order must be 1, 2, or 3, got {smoothness_order}"),
            ));
        }
        let model = Self {
            family,
            theta,
            smoothness_order,
        };
        let (region_lo, region_hi) = model.theta_region();
        if theta < region_lo || theta > region_hi {
            return Err(invalid(
                "theta-region",
                format!(
                    "theta = {theta} lies outside the valid parameter region [{region_lo}, {region_hi}] for this service family"
                ),
            ));
        }
        if let ServiceFamily::Scale(base) = &model.family {
            if base.support().0 < T::zero() {
                return Err(invalid(
                    "support",
                    "scale-family base must have nonnegative support (unit positive law)".into(),
                ));
            }
        }
        if let ServiceFamily::Custom(custom) = &model.family {
            let available = 1 + u8::from(custom.d2.is_some()) + u8::from(custom.d3.is_some());
            if smoothness_order > available {
                return Err(SimError::Smoothness(format!(
                    "custom model declares smoothness_order {smoothness_order} but supplies pathwise derivatives only up to order {available}"
                )));
            }
            if smoothness_order >= 3 && custom.d2.is_none() {
                return Err(SimError::Smoothness(
                    "custom model with smoothness_order 3 must supply d2 as well as d3".into(),
                ));
            }
        }
        Ok(model)
    }

    pub fn location(base: ContinuousDistribution<T>, theta: T) -> Result<Self, SimError> {
        Self::validated(ServiceFamily::Location(base), theta, 3)
    }

    pub fn scale(base: ContinuousDistribution<T>, theta: T) -> Result<Self, SimError> {
        Self::validated(ServiceFamily::Scale(base), theta, 3)
    }

    pub fn deterministic_theta(theta: T) -> Result<Self, SimError> {
        Self::validated(ServiceFamily::DeterministicTheta, theta, 3)
    }

    pub fn custom(custom: CustomService<T>, theta: T, smoothness_order: u8) -> Result<Self, SimError> {
        Self::validated(ServiceFamily::Custom(custom), theta, smoothness_order)
    }

    /// Re-declare the smoothness order (lowering what the model asserts).
    pub fn with_smoothness_order(self, smoothness_order: u8) -> Result<Self, SimError> {
        Self::validated(self.family, self.theta, smoothness_order)
    }

    pub fn family(&self) -> &ServiceFamily<T> {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            ServiceFamily::Location(_) => "location",
            ServiceFamily::Scale(_) => "scale",
            ServiceFamily::DeterministicTheta => "deterministic_theta",
            ServiceFamily::Custom(_) => "custom",
        }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn smoothness_order(&self) -> u8 {
        self.smoothness_order
    }

    /// True when the service time is deterministic given `theta`. The
    /// unbiasedness guarantees extend to this case even though the service
    /// law is not purely continuous; reports flag it for transparency.
    pub fn is_deterministic_service(&self) -> bool {
        match &self.family {
            ServiceFamily::DeterministicTheta => true,
            ServiceFamily::Location(base) | ServiceFamily::Scale(base) => {
                matches!(base, ContinuousDistribution::Deterministic { .. })
            }
            ServiceFamily::Custom(_) => false,
        }
    }

    /// Valid closed theta region `[lower, upper]` keeping the service-time
    /// support nonnegative.
    pub fn theta_region(&self) -> (T, T) {
        match &self.family {
            ServiceFamily::Location(base) => {
                let lo = -base.support().0;
                (lo.max(T::zero()), T::infinity())
            }
            ServiceFamily::Scale(_) | ServiceFamily::DeterministicTheta => {
                (T::zero(), T::infinity())
            }
            ServiceFamily::Custom(custom) => custom.theta_region,
        }
    }

    /// The same model at a shifted parameter (finite-difference stencils).
    pub fn at_theta(&self, theta: T) -> Result<Self, SimError> {
        let (lo, hi) = self.theta_region();
        if !theta.is_finite() || theta <= T::zero() || theta < lo || theta > hi {
            return Err(SimError::ParameterRegion(format!(
                "theta = {theta} leaves the valid parameter region [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            family: self.family.clone(),
            theta,
            smoothness_order: self.smoothness_order,
        })
    }

    /// Pathwise derivative of the draw via `S' = -(dF/dtheta)/(dF/dx)` at
    /// `x = s`, specialized to closed forms for the built-in families.
    pub fn lemma3_derivative(&self, s: T) -> Result<T, SimError> {
        match &self.family {
            ServiceFamily::Location(_) | ServiceFamily::DeterministicTheta => Ok(T::one()),
            ServiceFamily::Scale(_) => Ok(s / self.theta),
            ServiceFamily::Custom(custom) => {
                let fx = (custom.cdf_dx)(s, self.theta);
                if fx == T::zero() {
                    return Err(SimError::DegenerateDensity {
                        at: s.to_f64_lossy(),
                    });
                }
                Ok(-(custom.cdf_dtheta)(s, self.theta) / fx)
            }
        }
    }

    /// Pathwise derivatives for a realized draw `s`, truncated at the
    /// declared smoothness order.
    pub fn derivatives_at(&self, s: T) -> Result<SampleWithDerivatives<T>, SimError> {
        let d1 = self.lemma3_derivative(s)?;
        let (d2, d3) = match &self.family {
            ServiceFamily::Location(_)
            | ServiceFamily::Scale(_)
            | ServiceFamily::DeterministicTheta => (Some(T::zero()), Some(T::zero())),
            ServiceFamily::Custom(custom) => (
                custom.d2.as_ref().map(|f| f(s, self.theta)),
                custom.d3.as_ref().map(|f| f(s, self.theta)),
            ),
        };
        Ok(SampleWithDerivatives {
            value: s,
            d1: (self.smoothness_order >= 1).then_some(d1),
            d2: if self.smoothness_order >= 2 { d2 } else { None },
            d3: if self.smoothness_order >= 3 { d3 } else { None },
        })
    }

    /// Draw the first service time together with its pathwise derivatives.
    pub fn sample(&self, stream: &mut RandomStream) -> Result<SampleWithDerivatives<T>, SimError> {
        let s = match &self.family {
            ServiceFamily::Location(base) => self.theta + base.sample(stream),
            ServiceFamily::Scale(base) => self.theta * base.sample(stream),
            ServiceFamily::DeterministicTheta => self.theta,
            ServiceFamily::Custom(custom) => {
                let u = stream.uniform();
                invert_cdf(custom, self.theta, u)?
            }
        };
        self.derivatives_at(s)
    }
}

/// Invert a custom c.d.f. by bisection on its support.
fn invert_cdf<T: Real>(custom: &CustomService<T>, theta: T, u: T) -> Result<T, SimError> {
    let (mut lo, mut hi) = (custom.support)(theta);
    if !hi.is_finite() {
        hi = lo.max(T::zero()) + T::one();
        let mut guard = 0;
        while (custom.cdf)(hi, theta) < u {
            hi = hi * T::from_f64_lossy(2.0);
            guard += 1;
            if guard > 200 {
                return Err(SimError::Convergence(
                    "custom c.d.f. never reached the target quantile while expanding the support".into(),
                ));
            }
        }
    }
    for _ in 0..200 {
        let mid = (lo + hi) * T::from_f64_lossy(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if (custom.cdf)(mid, theta) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::from_f64_lossy(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn exp1() -> ContinuousDistribution<f64> {
        ContinuousDistribution::exponential(1.0).unwrap()
    }

    fn u01() -> ContinuousDistribution<f64> {
        ContinuousDistribution::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn deterministic_sample_consumes_no_randomness() {
        let dist = ContinuousDistribution::deterministic(0.7).unwrap();
        let mut stream = RandomStream::new(5, 0);
        let mut untouched = stream.clone();
        assert_eq!(dist.sample(&mut stream), 0.7);
        assert_eq!(stream.uniform::<f64>(), untouched.uniform::<f64>());
    }

    #[test]
    fn uniform_sample_stays_in_support() {
        let dist = u01();
        let mut stream = RandomStream::new(0, 0);
        for _ in 0..1_000 {
            let x = dist.sample(&mut stream);
            assert!(x > 0.0 && x < 1.0);
        }
    }

    #[test]
    fn exponential_sample_mean_matches_law_of_large_numbers() {
        let dist = exp1();
        let mut stream = RandomStream::new(123, 0);
        let n = 1_000_000;
        let sum: f64 = (0..n).map(|_| dist.sample(&mut stream)).sum();
        let mean = sum / n as f64;
        // SE of the sample mean is 1/sqrt(n); allow three of them.
        assert!((mean - 1.0).abs() < 3.0 / (n as f64).sqrt(), "mean = {mean}");
    }

    #[test]
    fn pdf_values() {
        assert!((exp1().pdf(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(u01().pdf(0.5), 1.0);
        assert_eq!(u01().pdf(2.0), 0.0);
        assert_eq!(exp1().pdf(-0.5), 0.0);
    }

    #[test]
    fn pdf_prime_values_and_gating() {
        assert!((exp1().pdf_prime(1.0).unwrap() + (-1.0f64).exp()).abs() < 1e-15);
        let exp2 = ContinuousDistribution::exponential(2.0).unwrap();
        assert_eq!(exp2.pdf_prime(0.0).unwrap(), -4.0);
        let err = u01().pdf_prime(0.5).unwrap_err();
        assert_eq!(err.code(), "capability");
        assert!(err.to_string().contains("Assumption 4"));
    }

    #[test]
    fn capability_flags() {
        assert!(exp1().has_continuous_density_on_positive_line());
        assert!(exp1().has_density_derivative());
        assert!(!u01().has_continuous_density_on_positive_line());
        assert!(!u01().has_density_derivative());
        let det = ContinuousDistribution::deterministic(1.0).unwrap();
        assert!(!det.has_density());
    }

    #[test]
    fn densities_integrate_to_one() {
        let cases: Vec<(ContinuousDistribution<f64>, f64, f64)> = vec![
            (exp1(), 0.0, 40.0),
            (ContinuousDistribution::exponential(2.5).unwrap(), 0.0, 20.0),
            (u01(), 0.0, 1.0),
            (ContinuousDistribution::uniform(-0.2, 0.2).unwrap(), -0.2, 0.2),
            (ContinuousDistribution::uniform_location(1.0, 0.2).unwrap(), 0.8, 1.2),
        ];
        for (dist, lo, hi) in cases {
            let r = quad::integrate(|x| dist.pdf(x), lo, hi, 1e-10, &[], 2_000).unwrap();
            assert!(
                (r.value - 1.0).abs() < 1e-8,
                "{} integrates to {}",
                dist.family_name(),
                r.value
            );
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        let dists = [exp1(), u01(), ContinuousDistribution::uniform_location(1.0, 0.3).unwrap()];
        for dist in &dists {
            for k in 1..100 {
                let u = k as f64 / 100.0;
                let x = dist.quantile(u);
                assert!((dist.cdf(x) - u).abs() < 1e-12, "{}", dist.family_name());
            }
        }
    }

    #[test]
    fn uniform_location_requires_nonnegative_support() {
        let err = ContinuousDistribution::uniform_location(0.5, 0.7).unwrap_err();
        assert_eq!(err.code(), "validation");
    }

    #[test]
    fn lemma3_closed_forms() {
        // Scale family through an explicit c.d.f. F(x; theta) = 1 - exp(-x/theta).
        let custom = CustomService::new(
            |x: f64, th: f64| 1.0 - (-x / th).exp(),
            |x, th| -(x / (th * th)) * (-x / th).exp(),
            |x, th| (-x / th).exp() / th,
            |_| (0.0, f64::INFINITY),
        );
        let model = ServiceModel::custom(custom, 2.0, 1).unwrap();
        assert!((model.lemma3_derivative(3.0).unwrap() - 1.5).abs() < 1e-12);

        let scale = ServiceModel::scale(exp1(), 2.0).unwrap();
        assert!((scale.lemma3_derivative(3.0).unwrap() - 1.5).abs() < 1e-15);

        let location = ServiceModel::location(u01(), 1.0).unwrap();
        assert_eq!(location.lemma3_derivative(0.31).unwrap(), 1.0);

        // F(x; theta) = x / theta on (0, theta): scale family with uniform base.
        let linear = CustomService::new(
            |x: f64, th: f64| (x / th).clamp(0.0, 1.0),
            |x, th| -x / (th * th),
            |_, th| 1.0 / th,
            |th| (0.0, th),
        );
        let model = ServiceModel::custom(linear, 2.0, 1).unwrap();
        assert!((model.lemma3_derivative(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn degenerate_density_is_reported() {
        let flat = CustomService::new(
            |x: f64, th: f64| (x / th).clamp(0.0, 1.0),
            |x, th| -x / (th * th),
            |x, th| if x > th { 0.0 } else { 1.0 / th },
            |th| (0.0, th),
        );
        let model = ServiceModel::custom(flat, 1.0, 1).unwrap();
        let err = model.lemma3_derivative(2.0).unwrap_err();
        assert_eq!(err.code(), "degenerate-density");
    }

    #[test]
    fn location_sample_matches_shift() {
        let base = ContinuousDistribution::uniform(-0.2, 0.2).unwrap();
        let model = ServiceModel::location(base, 1.0).unwrap();
        let mut stream = RandomStream::new(7, 0);
        for _ in 0..200 {
            let s = model.sample(&mut stream).unwrap();
            assert!(s.value > 0.8 && s.value < 1.2);
            assert_eq!(s.d1, Some(1.0));
            assert_eq!(s.d2, Some(0.0));
            assert_eq!(s.d3, Some(0.0));
        }
    }

    #[test]
    fn scale_derivatives_at_fixed_draw() {
        // Base draw z = 1.25 at theta = 0.8 gives s = 1.0 and d1 = s/theta.
        let model = ServiceModel::scale(exp1(), 0.8).unwrap();
        let s = model.derivatives_at(1.0).unwrap();
        assert!((s.d1.unwrap() - 1.25).abs() < 1e-15);
        assert_eq!(s.d2, Some(0.0));
        assert_eq!(s.d3, Some(0.0));
    }

    #[test]
    fn deterministic_theta_sample() {
        let model = ServiceModel::deterministic_theta(0.5).unwrap();
        let mut stream = RandomStream::new(1, 1);
        let s = model.sample(&mut stream).unwrap();
        assert_eq!(s.value, 0.5);
        assert_eq!(s.d1, Some(1.0));
        assert_eq!(s.d2, Some(0.0));
        assert_eq!(s.d3, Some(0.0));
    }

    #[test]
    fn derivatives_above_smoothness_order_are_absent() {
        let model = ServiceModel::scale(exp1(), 1.0)
            .unwrap()
            .with_smoothness_order(1)
            .unwrap();
        let s = model.derivatives_at(0.4).unwrap();
        assert!(s.d1.is_some());
        assert_eq!(s.d2, None);
        assert_eq!(s.d3, None);
        let err = s.d2_or_err().unwrap_err();
        assert_eq!(err.code(), "smoothness");
        assert!(err.to_string().contains("Assumption 2'"));
    }

    #[test]
    fn custom_sampling_respects_the_cdf() {
        // U(0, theta) via its c.d.f.; quantiles must match the closed form.
        let linear = CustomService::new(
            |x: f64, th: f64| (x / th).clamp(0.0, 1.0),
            |x, th| -x / (th * th),
            |_, th| 1.0 / th,
            |th| (0.0, th),
        );
        let model = ServiceModel::custom(linear, 2.0, 1).unwrap();
        let mut stream = RandomStream::new(3, 0);
        let mut replay = stream.clone();
        let s = model.sample(&mut stream).unwrap();
        let u: f64 = replay.uniform();
        assert!((s.value - 2.0 * u).abs() < 1e-9);
    }

    #[test]
    fn theta_region_for_location_family() {
        let base = ContinuousDistribution::uniform(-0.2, 0.2).unwrap();
        let model = ServiceModel::location(base, 1.0).unwrap();
        assert_eq!(model.theta_region().0, 0.2);
        assert!(model.at_theta(0.15).is_err());
        assert!(model.at_theta(0.25).is_ok());
    }
}
