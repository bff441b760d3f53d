//! Verification suites over monodromy datasets, their reports, and fan figures.

pub mod numeric;
pub mod report;
pub mod suites;
pub mod svg;

use std::str::FromStr;

use nilcone_core::birational::movable_chambers;
use nilcone_core::cones::{cone_chain, quotient_fan};
use nilcone_core::{Dataset, Error, Result};

pub use numeric::{transport_records, LoopChoice, TransportPlan, TransportRun};
pub use report::{Record, Report, Status, Summary};
pub use suites::{run_verification, Suite};
pub use svg::{fan_svg, FanFigure};

/// Side of the mirror correspondence a fan is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Movable-cone chambers of the birational models.
    A,
    /// Glued nilpotent cones modulo `I_2`.
    B,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            _ => Err(Error::Schema(format!("unknown side {s:?}"))),
        }
    }
}

/// The fan of `side` at `depth` orbit steps on each side of the fundamental domain.
pub fn fan_figure(ds: &Dataset, side: Side, depth: usize) -> Result<FanFigure> {
    match side {
        Side::A => {
            let fan = movable_chambers(ds, depth)?;
            Ok(FanFigure::from_chambers(&fan, format!("{} movable-cone chambers, depth {depth}", ds.name())))
        }
        Side::B => {
            let d = depth as i64;
            let fan = quotient_fan(&cone_chain(ds, -d, d)?)?;
            Ok(FanFigure::from_quotient(&fan, format!("{} glued nilpotent cones mod I2, depth {depth}", ds.name())))
        }
    }
}
