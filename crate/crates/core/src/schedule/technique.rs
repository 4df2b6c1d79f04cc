use core::fmt;
use core::str::FromStr;

use crate::error::Error;

/// Loop scheduling technique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Technique {
    Static,
    Ss,
    Fsc,
    Mfsc,
    Gss,
    Tss,
    Fac,
    Wf,
    Rand,
    AwfB,
    AwfC,
    AwfD,
    AwfE,
    Af,
}

impl Technique {
    pub const ALL: [Technique; 14] = [
        Technique::Static,
        Technique::Ss,
        Technique::Fsc,
        Technique::Mfsc,
        Technique::Gss,
        Technique::Tss,
        Technique::Fac,
        Technique::Wf,
        Technique::Rand,
        Technique::AwfB,
        Technique::AwfC,
        Technique::AwfD,
        Technique::AwfE,
        Technique::Af,
    ];

    /// The thirteen self-scheduling techniques (everything except STATIC).
    pub fn dynamic() -> impl Iterator<Item = Technique> {
        Self::ALL.into_iter().filter(|t| t.is_dynamic())
    }

    pub fn name(self) -> &'static str {
        match self {
            Technique::Static => "STATIC",
            Technique::Ss => "SS",
            Technique::Fsc => "FSC",
            Technique::Mfsc => "mFSC",
            Technique::Gss => "GSS",
            Technique::Tss => "TSS",
            Technique::Fac => "FAC",
            Technique::Wf => "WF",
            Technique::Rand => "RAND",
            Technique::AwfB => "AWF-B",
            Technique::AwfC => "AWF-C",
            Technique::AwfD => "AWF-D",
            Technique::AwfE => "AWF-E",
            Technique::Af => "AF",
        }
    }

    pub fn is_dynamic(self) -> bool {
        self != Technique::Static
    }

    /// Techniques that learn from measured chunk times during execution.
    pub fn is_adaptive(self) -> bool {
        matches!(
            self,
            Technique::AwfB | Technique::AwfC | Technique::AwfD | Technique::AwfE | Technique::Af
        )
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Technique {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: alloc::string::String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .map(|c| c.to_ascii_uppercase())
            .collect();
        Technique::ALL
            .into_iter()
            .find(|t| {
                let name: alloc::string::String = t
                    .name()
                    .chars()
                    .filter(|c| *c != '-')
                    .map(|c| c.to_ascii_uppercase())
                    .collect();
                name == norm
            })
            .ok_or_else(|| Error::UnknownTechnique(s.into()))
    }
}
