//! Neuron nonlinearities and their exact derivatives.

/// Selector for the nonlinearity rho applied to neuron states.
///
/// Every variant is monotone increasing with a strictly positive derivative,
/// and the derivative can be recovered from the function value alone, which
/// lets the relaxation loop evaluate one transcendental per neuron per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// sigmoid4(x) = sigmoid(4x); the reference choice.
    Sigmoid4,
    /// Plain logistic sigmoid.
    Sigmoid,
    /// Hyperbolic tangent.
    Tanh,
}

impl Default for Activation {
    fn default() -> Self {
        Activation::Sigmoid4
    }
}

/// Numerically stable logistic sigmoid.
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Activation {
    /// rho(x).
    pub fn value(self, x: f64) -> f64 {
        match self {
            Activation::Sigmoid4 => sigmoid(4.0 * x),
            Activation::Sigmoid => sigmoid(x),
            Activation::Tanh => x.tanh(),
        }
    }

    /// rho'(x), the analytic derivative.
    pub fn derivative(self, x: f64) -> f64 {
        self.prime_from_value(self.value(x))
    }

    /// Recover rho'(x) from rho = rho(x) without reevaluating the exponential.
    pub fn prime_from_value(self, rho: f64) -> f64 {
        match self {
            Activation::Sigmoid4 => 4.0 * rho * (1.0 - rho),
            Activation::Sigmoid => rho * (1.0 - rho),
            Activation::Tanh => 1.0 - rho * rho,
        }
    }

    /// Name used in config files and checkpoints.
    pub fn name(self) -> &'static str {
        match self {
            Activation::Sigmoid4 => "sigmoid4",
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
        }
    }

    /// Parse the config-file spelling.
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "sigmoid4" => Some(Activation::Sigmoid4),
            "sigmoid" => Some(Activation::Sigmoid),
            "tanh" => Some(Activation::Tanh),
            _ => None,
        }
    }
}

/// Evaluate rho and rho' at a point.
pub fn activation_eval(x: f64, act: Activation) -> (f64, f64) {
    let rho = act.value(x);
    (rho, act.prime_from_value(rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid4_at_zero() {
        let (rho, prime) = activation_eval(0.0, Activation::Sigmoid4);
        assert_eq!(rho, 0.5);
        assert_eq!(prime, 1.0);
    }

    #[test]
    fn sigmoid4_saturates() {
        let (rho, prime) = activation_eval(1e3, Activation::Sigmoid4);
        assert!((rho - 1.0).abs() < 1e-12);
        assert!(prime.abs() < 1e-12);
        let (rho, prime) = activation_eval(-1e3, Activation::Sigmoid4);
        assert!(rho.abs() < 1e-12);
        assert!(prime.abs() < 1e-12);
    }

    #[test]
    fn sigmoid4_at_quarter() {
        // sigmoid(1) and 4*rho*(1-rho), evaluated from the closed form.
        let (rho, prime) = activation_eval(0.25, Activation::Sigmoid4);
        assert!((rho - 0.731_058_578_630_004_9).abs() < 1e-12);
        assert!((prime - 0.786_447_732_965_927_4).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-6;
        for act in [Activation::Sigmoid4, Activation::Sigmoid, Activation::Tanh] {
            for &x in &[-3.0, -1.0, -0.25, 0.0, 0.1, 0.5, 1.0, 2.5] {
                let (_, prime) = activation_eval(x, act);
                let fd = (act.value(x + h) - act.value(x - h)) / (2.0 * h);
                assert!(
                    (prime - fd).abs() < 1e-8,
                    "{} at {}: analytic {} vs fd {}",
                    act.name(),
                    x,
                    prime,
                    fd
                );
            }
        }
    }

    #[test]
    fn monotone_and_positive_derivative() {
        for act in [Activation::Sigmoid4, Activation::Sigmoid, Activation::Tanh] {
            let mut prev = act.value(-20.0);
            let mut x = -20.0 + 0.25;
            while x <= 20.0 {
                let cur = act.value(x);
                assert!(cur > prev, "{} not monotone at {}", act.name(), x);
                assert!(act.derivative(x) > 0.0);
                prev = cur;
                x += 0.25;
            }
        }
    }
}
