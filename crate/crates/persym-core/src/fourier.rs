//! Persistent Fourier analysis on cyclic persistence groups.
//!
//! Frame `t` carries `Z/N_t` and consecutive frames are linked by `x -> c_t x mod N_{t+1}`.
//! Transforms pair with conjugated characters.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

const COMPAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum FourierError {
    Empty,
    LengthMismatch,
    ZeroOrder { frame: usize },
    NotHomomorphism { frame: usize },
    FrameSize { frame: usize },
    Incompatible { frame: usize, x: usize },
    Range,
}

impl fmt::Display for FourierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FourierError::Empty => write!(f, "persistence group has no frames"),
            FourierError::LengthMismatch => write!(f, "expected one multiplier per consecutive pair of frames"),
            FourierError::ZeroOrder { frame } => write!(f, "frame {frame} has order 0"),
            FourierError::NotHomomorphism { frame } => {
                write!(f, "multiplier {frame} does not define a homomorphism")
            }
            FourierError::FrameSize { frame } => write!(f, "values at frame {frame} have the wrong length"),
            FourierError::Incompatible { frame, x } => {
                write!(f, "function is not compatible with the structure map at frame {frame}, element {x}")
            }
            FourierError::Range => write!(f, "frame index out of range"),
        }
    }
}

impl core::error::Error for FourierError {}

fn chi(k: usize, x: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k * x) % n) as f64 / n as f64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPersistenceGroup {
    orders: Vec<usize>,
    multipliers: Vec<usize>,
}

impl CyclicPersistenceGroup {
    pub fn new(orders: Vec<usize>, multipliers: Vec<usize>) -> Result<Self, FourierError> {
        if orders.is_empty() {
            return Err(FourierError::Empty);
        }
        if multipliers.len() + 1 != orders.len() {
            return Err(FourierError::LengthMismatch);
        }
        if let Some(frame) = orders.iter().position(|&n| n == 0) {
            return Err(FourierError::ZeroOrder { frame });
        }
        for (t, &c) in multipliers.iter().enumerate() {
            if (c * orders[t]) % orders[t + 1] != 0 {
                return Err(FourierError::NotHomomorphism { frame: t });
            }
        }
        let multipliers = multipliers.iter().enumerate().map(|(t, &c)| c % orders[t + 1]).collect();
        Ok(CyclicPersistenceGroup { orders, multipliers })
    }

    /// `Z/2^s` linked by doubling, for `s = 0..=m`.
    pub fn doubling(m: usize) -> Self {
        CyclicPersistenceGroup { orders: (0..=m).map(|s| 1usize << s).collect(), multipliers: vec![2; m] }
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn multipliers(&self) -> &[usize] {
        &self.multipliers
    }

    pub fn last(&self) -> usize {
        self.orders.len() - 1
    }

    fn range(&self, s: usize, t: usize) -> Result<(), FourierError> {
        if s > t || t > self.last() {
            Err(FourierError::Range)
        } else {
            Ok(())
        }
    }

    /// Composite multiplier `c_{s,t}` reduced mod `N_t`.
    pub fn multiplier(&self, s: usize, t: usize) -> Result<usize, FourierError> {
        self.range(s, t)?;
        Ok(self.multipliers[s..t].iter().fold(1 % self.orders[t], |acc, &c| (acc * c) % self.orders[t]))
    }

    pub fn phi(&self, s: usize, t: usize, x: usize) -> Result<usize, FourierError> {
        Ok((self.multiplier(s, t)? * x) % self.orders[t])
    }

    /// Kernel of `phi_{s,t}` as a subset of `Z/N_s`.
    pub fn kernel(&self, s: usize, t: usize) -> Result<Vec<usize>, FourierError> {
        let c = self.multiplier(s, t)?;
        Ok((0..self.orders[s]).filter(|&x| (c * x) % self.orders[t] == 0).collect())
    }

    /// Whether `chi_k` on frame `s` is pulled back from frame `t`, i.e. trivial on the kernel.
    pub fn is_pullback(&self, s: usize, t: usize, k: usize) -> Result<bool, FourierError> {
        let n = self.orders[s];
        Ok(self.kernel(s, t)?.iter().all(|&x| (k * x) % n == 0))
    }

    /// Frequency on frame `s` obtained by pulling back frequency `j` of frame `t`.
    pub fn pullback_index(&self, s: usize, t: usize, j: usize) -> Result<usize, FourierError> {
        let c = self.multiplier(s, t)?;
        let (ns, nt) = (self.orders[s], self.orders[t]);
        Ok(((j * c % nt) * ns / nt) % ns)
    }
}

/// Values `theta_t` on every frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PersistentFunction {
    values: Vec<Vec<Complex64>>,
}

impl PersistentFunction {
    /// Checks the shapes and `theta_t(phi(x)) = theta_s(x)` on consecutive frames.
    pub fn new(g: &CyclicPersistenceGroup, values: Vec<Vec<Complex64>>) -> Result<Self, FourierError> {
        if values.len() != g.orders.len() {
            return Err(FourierError::LengthMismatch);
        }
        if let Some(frame) = values.iter().zip(&g.orders).position(|(v, &n)| v.len() != n) {
            return Err(FourierError::FrameSize { frame });
        }
        for t in 0..g.last() {
            for x in 0..g.orders[t] {
                let y = g.phi(t, t + 1, x)?;
                let (a, b) = (values[t][x], values[t + 1][y]);
                if (a - b).norm() > COMPAT_TOL * 1.0f64.max(a.norm()).max(b.norm()) {
                    return Err(FourierError::Incompatible { frame: t, x });
                }
            }
        }
        Ok(PersistentFunction { values })
    }

    /// The compatible function determined by its values on the last frame.
    pub fn from_last(g: &CyclicPersistenceGroup, last: Vec<Complex64>) -> Result<Self, FourierError> {
        let m = g.last();
        if last.len() != g.orders[m] {
            return Err(FourierError::FrameSize { frame: m });
        }
        let values = (0..=m)
            .map(|s| (0..g.orders[s]).map(|x| g.phi(s, m, x).map(|y| last[y])).collect())
            .collect::<Result<_, _>>()?;
        Ok(PersistentFunction { values })
    }

    /// `theta_s(x) = f(x / N_s)` sampled on every frame, e.g. `cos(2 pi u)`.
    pub fn sampled(g: &CyclicPersistenceGroup, f: impl Fn(f64) -> Complex64) -> Result<Self, FourierError> {
        let values =
            g.orders.iter().map(|&n| (0..n).map(|x| f(x as f64 / n as f64)).collect()).collect();
        Self::new(g, values)
    }

    pub fn frame(&self, t: usize) -> &[Complex64] {
        &self.values[t]
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }
}

/// Classical transform `sum_x v(x) conj(chi_k(x))` on `Z/N`.
pub fn dft(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|k| v.iter().enumerate().map(|(x, &a)| a * chi(k, x, n).conj()).sum()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub s: usize,
    pub t: usize,
    /// Indexed by frequency `k` in `Z/N_s`; zero where `chi_k` is not pulled back from frame `t`.
    pub coefficients: Vec<Complex64>,
    pub energies: Vec<f64>,
    /// Normalized energies; all zero when the total energy is zero.
    pub weights: Vec<f64>,
    pub entropy: f64,
}

impl Spectrum {
    fn from_coefficients(s: usize, t: usize, coefficients: Vec<Complex64>) -> Self {
        let energies: Vec<f64> = coefficients.iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = energies.iter().sum();
        let weights: Vec<f64> =
            energies.iter().map(|&e| if total > 0.0 { e / total } else { 0.0 }).collect();
        let entropy = -weights.iter().filter(|&&p| p > 0.0).map(|&p| p * libm::log(p)).sum::<f64>();
        Spectrum { s, t, coefficients, energies, weights, entropy }
    }

    pub fn total_energy(&self) -> f64 {
        self.energies.iter().sum()
    }

    /// Frequencies whose energy is within a relative `1e-9` of the maximum.
    pub fn dominant(&self) -> Vec<usize> {
        let max = self.energies.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return Vec::new();
        }
        (0..self.energies.len()).filter(|&k| self.energies[k] >= max * (1.0 - 1e-9)).collect()
    }
}

/// `(s,t)`-persistent transform of `theta`.
pub fn persistent_ft(
    g: &CyclicPersistenceGroup,
    theta: &PersistentFunction,
    s: usize,
    t: usize,
) -> Result<Spectrum, FourierError> {
    g.range(s, t)?;
    let full = dft(theta.frame(s));
    let coefficients = full
        .into_iter()
        .enumerate()
        .map(|(k, z)| g.is_pullback(s, t, k).map(|keep| if keep { z } else { Complex64::new(0.0, 0.0) }))
        .collect::<Result<_, _>>()?;
    Ok(Spectrum::from_coefficients(s, t, coefficients))
}

/// Reconstructs `theta_s` from the characters trivial on `ker phi_{s,t}`, normalized by `N_s`.
pub fn inversion(g: &CyclicPersistenceGroup, spectrum: &Spectrum) -> Result<Vec<Complex64>, FourierError> {
    let (s, t) = (spectrum.s, spectrum.t);
    g.range(s, t)?;
    let n = g.orders[s];
    if spectrum.coefficients.len() != n {
        return Err(FourierError::FrameSize { frame: s });
    }
    let ks: Vec<usize> = (0..n).filter(|&k| g.is_pullback(s, t, k).unwrap_or(false)).collect();
    Ok((0..n)
        .map(|x| ks.iter().map(|&k| spectrum.coefficients[k] * chi(k, x, n)).sum::<Complex64>() / n as f64)
        .collect())
}

/// `(theta *_s eta)(y) = sum_h theta_s(h) eta_t(y - phi(h))` on `Z/N_t`.
pub fn persistent_convolution(
    g: &CyclicPersistenceGroup,
    theta: &PersistentFunction,
    eta: &PersistentFunction,
    s: usize,
    t: usize,
) -> Result<Vec<Complex64>, FourierError> {
    g.range(s, t)?;
    let nt = g.orders[t];
    let shifts: Vec<usize> = (0..g.orders[s]).map(|h| g.phi(s, t, h)).collect::<Result<_, _>>()?;
    Ok((0..nt)
        .map(|y| {
            theta
                .frame(s)
                .iter()
                .zip(&shifts)
                .map(|(&a, &p)| a * eta.frame(t)[(y + nt - p) % nt])
                .sum()
        })
        .collect())
}

/// Entropy, per-frequency trajectory `|F_{s,t'}(k)|` for `t'` in `s..=m`, and dominant frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFeatures {
    pub entropy: f64,
    /// `trajectory[i][k]` is the magnitude at frame `s + i`.
    pub trajectory: Vec<Vec<f64>>,
    pub dominant: Vec<usize>,
}

pub fn spectral_features(
    g: &CyclicPersistenceGroup,
    theta: &PersistentFunction,
    s: usize,
    t: usize,
) -> Result<SpectralFeatures, FourierError> {
    let spec = persistent_ft(g, theta, s, t)?;
    let trajectory = (s..=g.last())
        .map(|u| persistent_ft(g, theta, s, u).map(|sp| sp.coefficients.iter().map(|z| z.norm()).collect()))
        .collect::<Result<_, _>>()?;
    Ok(SpectralFeatures { entropy: spec.entropy, trajectory, dominant: spec.dominant() })
}

/// `sum_k conj(F[theta](k)) F[eta](k)`.
pub fn correlation(
    g: &CyclicPersistenceGroup,
    theta: &PersistentFunction,
    eta: &PersistentFunction,
    s: usize,
    t: usize,
) -> Result<Complex64, FourierError> {
    let a = persistent_ft(g, theta, s, t)?;
    let b = persistent_ft(g, eta, s, t)?;
    Ok(a.coefficients.iter().zip(&b.coefficients).map(|(x, y)| x.conj() * y).sum())
}

/// Matrix of `eta -> d_s eta - sum_h theta_s(h) eta(. - phi(h))` on `Z/N_t`, with `d_s = sum theta_s`.
pub fn persistent_laplacian(
    g: &CyclicPersistenceGroup,
    theta: &PersistentFunction,
    s: usize,
    t: usize,
) -> Result<DMatrix<Complex64>, FourierError> {
    g.range(s, t)?;
    let nt = g.orders[t];
    let d: Complex64 = theta.frame(s).iter().sum();
    let mut l = DMatrix::<Complex64>::identity(nt, nt) * d;
    for (h, &a) in theta.frame(s).iter().enumerate() {
        let p = g.phi(s, t, h)?;
        for y in 0..nt {
            l[(y, (y + nt - p) % nt)] -= a;
        }
    }
    Ok(l)
}
