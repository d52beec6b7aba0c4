//! The two pipelines behind a common trait, chosen by the shape of the input.

use crate::birkhoff::{hbar_cap_from_env, run_hypersurface, HypersurfaceResult, HypersurfaceSpec};
use crate::dmodule::{wps_presentation, Presentation};
use crate::error::{Error, Result};
use crate::ring::{wps_ring, QuantumRing};
use crate::weights::WeightData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Input {
    pub weights: Vec<u64>,
    /// Present in hypersurface mode.
    pub degree: Option<u64>,
    /// ħ-degree cap; `None` reads the environment, then falls back to σ.
    pub hbar_cap: Option<i32>,
}

impl Input {
    pub fn wps(weights: &[u64]) -> Input {
        Input {
            weights: weights.to_vec(),
            degree: None,
            hbar_cap: None,
        }
    }

    pub fn hypersurface(weights: &[u64], degree: u64) -> Input {
        Input {
            weights: weights.to_vec(),
            degree: Some(degree),
            hbar_cap: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WpsOutput {
    pub data: WeightData,
    pub presentation: Presentation,
    pub ring: QuantumRing,
}

#[derive(Clone, Debug)]
pub enum Output {
    Wps(WpsOutput),
    Hypersurface(Box<HypersurfaceResult>),
}

impl Output {
    pub fn ring(&self) -> &QuantumRing {
        match self {
            Output::Wps(o) => &o.ring,
            Output::Hypersurface(h) => &h.ring,
        }
    }

    pub fn pipeline(&self) -> &'static str {
        match self {
            Output::Wps(_) => WpsPipeline.id(),
            Output::Hypersurface(_) => HypersurfacePipeline.id(),
        }
    }
}

pub trait Pipeline: Send + Sync {
    fn id(&self) -> &'static str;
    fn accepts(&self, input: &Input) -> bool;
    /// Input errors only; nothing expensive happens here.
    fn validate(&self, input: &Input) -> Result<()>;
    fn run(&self, input: &Input) -> Result<Output>;
}

pub struct WpsPipeline;

impl Pipeline for WpsPipeline {
    fn id(&self) -> &'static str {
        "wps"
    }

    fn accepts(&self, input: &Input) -> bool {
        input.degree.is_none()
    }

    fn validate(&self, input: &Input) -> Result<()> {
        WeightData::new(&input.weights).map(|_| ())
    }

    fn run(&self, input: &Input) -> Result<Output> {
        let data = WeightData::new(&input.weights)?;
        let presentation = wps_presentation(&data);
        let ring = wps_ring(&data)?;
        Ok(Output::Wps(WpsOutput {
            data,
            presentation,
            ring,
        }))
    }
}

pub struct HypersurfacePipeline;

impl HypersurfacePipeline {
    fn spec(input: &Input) -> Result<HypersurfaceSpec> {
        let d = input
            .degree
            .ok_or_else(|| Error::InvalidInput("hypersurface mode needs a degree".into()))?;
        HypersurfaceSpec::new(&input.weights, d)
    }

    fn cap(input: &Input, spec: &HypersurfaceSpec) -> Result<i32> {
        match input.hbar_cap {
            Some(c) if c >= 0 => Ok(c),
            Some(c) => Err(Error::InvalidInput(format!("negative ħ-degree cap {c}"))),
            None => hbar_cap_from_env(spec),
        }
    }
}

impl Pipeline for HypersurfacePipeline {
    fn id(&self) -> &'static str {
        "hypersurface"
    }

    fn accepts(&self, input: &Input) -> bool {
        input.degree.is_some()
    }

    fn validate(&self, input: &Input) -> Result<()> {
        let spec = Self::spec(input)?;
        Self::cap(input, &spec).map(|_| ())
    }

    fn run(&self, input: &Input) -> Result<Output> {
        let spec = Self::spec(input)?;
        let cap = Self::cap(input, &spec)?;
        Ok(Output::Hypersurface(Box::new(run_hypersurface(&spec, cap)?)))
    }
}

static REGISTRY: [&dyn Pipeline; 2] = [&WpsPipeline, &HypersurfacePipeline];

pub fn registry() -> &'static [&'static dyn Pipeline] {
    &REGISTRY
}

pub fn select(input: &Input) -> Result<&'static dyn Pipeline> {
    registry()
        .iter()
        .copied()
        .find(|p| p.accepts(input))
        .ok_or_else(|| Error::InvalidInput("no pipeline accepts this input".into()))
}

pub fn run(input: &Input) -> Result<Output> {
    let p = select(input)?;
    p.validate(input)?;
    p.run(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_by_degree() {
        assert_eq!(select(&Input::wps(&[1, 2])).unwrap().id(), "wps");
        assert_eq!(select(&Input::hypersurface(&[1, 1, 2], 1)).unwrap().id(), "hypersurface");
    }

    #[test]
    fn invalid_inputs_are_input_errors() {
        for input in [
            Input::wps(&[]),
            Input::wps(&[0, 1]),
            Input::hypersurface(&[2, 1, 1], 1),
            Input::hypersurface(&[1, 1, 1], 3),
            Input::hypersurface(&[1, 1, 1], 4),
        ] {
            assert!(matches!(run(&input), Err(Error::InvalidInput(_))), "{input:?}");
        }
    }

    #[test]
    fn explicit_cap() {
        let mut input = Input::hypersurface(&[1, 1, 1, 2], 3);
        input.hbar_cap = Some(0);
        assert!(matches!(run(&input), Err(Error::GaugeCapExceeded { cap: 0, .. })));
        input.hbar_cap = Some(1);
        assert!(run(&input).is_ok());
    }
}
