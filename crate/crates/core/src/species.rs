/// Exchange symmetry of a set of particles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Species {
    Fermion,
    Boson,
    Distinguishable,
}

impl Species {
    /// Sign attached to a permutation of the given parity.
    #[inline]
    pub fn permutation_sign(self, odd: bool) -> f64 {
        match self {
            Species::Fermion if odd => -1.0,
            _ => 1.0,
        }
    }

    #[inline]
    pub fn is_identical(self) -> bool {
        !matches!(self, Species::Distinguishable)
    }
}

impl std::str::FromStr for Species {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fermion" | "fermions" => Ok(Species::Fermion),
            "boson" | "bosons" => Ok(Species::Boson),
            "distinguishable" | "none" => Ok(Species::Distinguishable),
            other => Err(format!("unknown species '{other}'")),
        }
    }
}

impl std::fmt::Display for Species {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Species::Fermion => "fermion",
            Species::Boson => "boson",
            Species::Distinguishable => "distinguishable",
        };
        f.write_str(s)
    }
}
