use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// One point of a one-parameter state family.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub phi: f64,
    pub probabilities: Vec<f64>,
    pub amplitudes: Option<Vec<Complex64>>,
}

/// Samples of a state family ordered by strictly increasing parameter.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbabilityPath {
    samples: Vec<PathSample>,
}

impl ProbabilityPath {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(samples: Vec<PathSample>) -> Result<Self> {
        let mut path = Self::new();
        for s in samples {
            path.push(s)?;
        }
        Ok(path)
    }

    /// Builds a path from probability vectors only.
    pub fn from_probabilities<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, Vec<f64>)>,
    {
        Self::from_samples(
            points
                .into_iter()
                .map(|(phi, probabilities)| PathSample {
                    phi,
                    probabilities,
                    amplitudes: None,
                })
                .collect(),
        )
    }

    /// Builds a path from states; amplitudes are recorded when `record` is set.
    pub fn from_states<'a, I>(points: I, record: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, &'a StateVector)>,
    {
        let mut path = Self::new();
        for (phi, state) in points {
            path.push_state(phi, state, record)?;
        }
        Ok(path)
    }

    pub fn push_state(&mut self, phi: f64, state: &StateVector, record: bool) -> Result<()> {
        self.push(PathSample {
            phi,
            probabilities: state.probabilities().into_vec(),
            amplitudes: record.then(|| state.amplitudes().to_vec()),
        })
    }

    pub fn push(&mut self, sample: PathSample) -> Result<()> {
        if !sample.phi.is_finite() {
            return Err(Error::Input("non-finite path parameter".into()));
        }
        if let Some(amps) = &sample.amplitudes {
            if amps.len() != sample.probabilities.len() {
                return Err(Error::InvalidDimension(
                    "amplitude and probability lengths differ".into(),
                ));
            }
        }
        if let Some(last) = self.samples.last() {
            if sample.phi <= last.phi {
                return Err(Error::Input(format!(
                    "path parameter must increase strictly: {} after {}",
                    sample.phi, last.phi
                )));
            }
            if sample.probabilities.len() != last.probabilities.len() {
                return Err(Error::InvalidDimension(
                    "path samples have different dimensions".into(),
                ));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn samples(&self) -> &[PathSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn phis(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.phi).collect()
    }

    pub fn has_amplitudes(&self) -> bool {
        !self.samples.is_empty() && self.samples.iter().all(|s| s.amplitudes.is_some())
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, |s| s.probabilities.len())
    }
}
