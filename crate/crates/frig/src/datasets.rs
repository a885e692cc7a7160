//! Embedded study datasets.
//!
//! Four catalogs ship with the crate:
//!
//! * `example3` — the 4-requirement selection graph used throughout the
//!   worked selection examples.
//! * `ran`, `pmr` — the Ericsson RAN (14 requirements, total cost 99) and
//!   PMR (11 requirements, total cost 101) catalogs; no explicit
//!   dependencies, strengths come from simulation sweeps.
//! * `pms` — the Precious Messaging System case study: 23 requirements,
//!   total value 326, total cost 242, and 113 explicit dependencies
//!   transcribed from the stakeholder-estimated dependency vectors.

use crate::graph::Frig;
use crate::io::parse_frig_json;

const EXAMPLE3_JSON: &str = include_str!("../data/example3.json");
const RAN_JSON: &str = include_str!("../data/ran.json");
const PMR_JSON: &str = include_str!("../data/pmr.json");
const PMS_JSON: &str = include_str!("../data/pms.json");

/// A 4x10 preference matrix consistent with the worked mining example:
/// two of ten users prefer both r1 and r3, three prefer r3.
pub const PREFERENCES_4X10_CSV: &str = include_str!("../data/preferences_4x10.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataset {
    Example3,
    Ran,
    Pmr,
    Pms,
}

impl Dataset {
    pub const ALL: [Dataset; 4] = [Dataset::Example3, Dataset::Ran, Dataset::Pmr, Dataset::Pms];

    pub fn id(self) -> &'static str {
        match self {
            Dataset::Example3 => "example3",
            Dataset::Ran => "ran",
            Dataset::Pmr => "pmr",
            Dataset::Pms => "pms",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Dataset::ALL.iter().copied().find(|d| d.id() == id)
    }

    pub fn frig(self) -> Frig {
        let json = match self {
            Dataset::Example3 => EXAMPLE3_JSON,
            Dataset::Ran => RAN_JSON,
            Dataset::Pmr => PMR_JSON,
            Dataset::Pms => PMS_JSON,
        };
        parse_frig_json(json).expect("embedded datasets are valid")
    }
}

impl std::fmt::Display for Dataset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{total_cost, total_value, validate};

    #[test]
    fn every_embedded_dataset_validates() {
        for dataset in Dataset::ALL {
            let frig = dataset.frig();
            assert!(
                validate(frig.requirements(), frig.rho()).is_valid(),
                "{dataset} should validate"
            );
        }
    }

    #[test]
    fn totals_match_the_reference_totals() {
        let example3 = Dataset::Example3.frig();
        assert_eq!(example3.len(), 4);
        assert_eq!(example3.edge_count(), 7);
        assert_eq!(total_cost(example3.requirements()), 45);
        assert_eq!(total_value(example3.requirements()), 90.0);

        let ran = Dataset::Ran.frig();
        assert_eq!((ran.len(), total_cost(ran.requirements())), (14, 99));

        let pmr = Dataset::Pmr.frig();
        assert_eq!((pmr.len(), total_cost(pmr.requirements())), (11, 101));

        let pms = Dataset::Pms.frig();
        assert_eq!(pms.len(), 23);
        assert_eq!(total_value(pms.requirements()), 326.0);
        assert_eq!(total_cost(pms.requirements()), 242);
        assert_eq!(pms.edge_count(), 113);
    }

    #[test]
    fn ids_round_trip() {
        for dataset in Dataset::ALL {
            assert_eq!(Dataset::from_id(dataset.id()), Some(dataset));
        }
        assert_eq!(Dataset::from_id("nope"), None);
    }
}
