use std::fmt;
use std::str::FromStr;

use super::baseline::{conjugate_synthesis_recon, pocs_recon_traced, zero_fill_recon, PocsParams};
use super::extrapolated::{lp_recon, LpVariant};
use super::homodyne::homodyne_recon;
use super::ReconResult;
use crate::error::{Error, Result};
use crate::fir::{fir_recon, FirParams};
use crate::kspace::{AcquisitionMask, ComplexGrid, GeometryParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ZeroFill,
    ConjSym,
    Homodyne,
    Pocs,
    Lp,
    LpFixed,
    LpProj,
    Fir,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::ZeroFill,
        Method::ConjSym,
        Method::Homodyne,
        Method::Pocs,
        Method::Lp,
        Method::LpFixed,
        Method::LpProj,
        Method::Fir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ZeroFill => "zerofill",
            Method::ConjSym => "conjsym",
            Method::Homodyne => "homodyne",
            Method::Pocs => "pocs",
            Method::Lp => "lp",
            Method::LpFixed => "lp-fixed",
            Method::LpProj => "lp-proj",
            Method::Fir => "fir",
        }
    }

    pub fn uses_steps(self) -> bool {
        matches!(self, Method::Lp | Method::LpFixed | Method::LpProj)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::param(format!(
                    "unknown method '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Parameters for every method; each method reads only its own.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReconOptions {
    /// Predicted phase-encode lines for the linear-prediction methods.
    pub steps: usize,
    pub geometry: GeometryParams,
    pub pocs: PocsParams,
    pub fir: FirParams,
}

pub fn reconstruct(
    method: Method,
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
    opts: &ReconOptions,
) -> Result<ReconResult> {
    let lp = |v| lp_recon(partial, mask, opts.steps, &opts.geometry, v);
    match method {
        Method::ZeroFill => zero_fill_recon(partial, mask),
        Method::ConjSym => conjugate_synthesis_recon(partial, mask),
        Method::Homodyne => homodyne_recon(partial, mask),
        Method::Pocs => pocs_recon_traced(partial, mask, opts.pocs).map(|t| t.result),
        Method::Lp => lp(LpVariant::Iterated),
        Method::LpFixed => lp(LpVariant::Fixed),
        Method::LpProj => lp(LpVariant::Projected),
        Method::Fir => fir_recon(partial, mask, &opts.fir),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("lp_proj".parse::<Method>().is_err());
    }
}
