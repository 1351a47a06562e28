//! Built-in schemes, each a channel plus the plan for measuring it.
//!
//! | scheme        | sender                                  | controllers                  |
//! |---------------|-----------------------------------------|------------------------------|
//! | GHZ / N-GHZ   | Bell on (Xₙ, Aₙ)                        | X basis on every qubit       |
//! | 2-GHZ         | Bell on (X₁, A₁), (X₂, A₂)              | one Bell measurement         |
//! | Yang          | Bell on (Xₙ, Aₙ), X basis on A′         | X basis                      |
//! | Man           | Bell on (Xₙ, Aₙ)                        | X basis                      |
//! | PE4           | Bell on (X, A)                          | computational on both qubits |
//!
//! Correction tables are derived when a scheme is built, which doubles as a
//! check that the plan achieves perfect teleportation.

use alloc::vec;
use alloc::vec::Vec;

use crate::channels::{
    man_channel, nghz_channel, partial_nghz_channel, pe4_channel, two_ghz_channel, yang_channel,
    PartyMap, Pe4Params, YangVariant,
};
use crate::error::Result;
use crate::measure::MeasurementBasis;
use crate::protocol::{
    derive_corrections, verify_table, Corrections, MeasurementStep, ProtocolSpec, Wire,
};
use crate::qstate::PureState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeId {
    /// Single qubit over one GHZ triple.
    Ghz,
    /// Two qubits over two GHZ triples, controller does a Bell measurement.
    TwoGhz,
    NGhz { n: usize, m: usize },
    Yang { n: usize, m: usize, variant: YangVariant },
    Man { n: usize, m: usize },
    Pe4(Pe4Params),
    /// One controller steering only `covered` of the `n` Bob qubits.
    PartialNGhz { n: usize, covered: usize },
}

impl SchemeId {
    pub fn name(&self) -> &'static str {
        match self {
            SchemeId::Ghz => "ghz",
            SchemeId::TwoGhz => "2ghz",
            SchemeId::NGhz { .. } => "nghz",
            SchemeId::Yang { .. } => "yang",
            SchemeId::Man { .. } => "man",
            SchemeId::Pe4(_) => "pe4",
            SchemeId::PartialNGhz { .. } => "nghz-partial",
        }
    }

    /// Number of teleported qubits `N`.
    pub fn teleported_qubits(&self) -> usize {
        match *self {
            SchemeId::Ghz | SchemeId::Pe4(_) => 1,
            SchemeId::TwoGhz => 2,
            SchemeId::NGhz { n, .. }
            | SchemeId::Yang { n, .. }
            | SchemeId::Man { n, .. }
            | SchemeId::PartialNGhz { n, .. } => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scheme {
    pub id: SchemeId,
    pub spec: ProtocolSpec,
    /// Whether all controllers play interchangeable roles, so that equal
    /// control power is expected of them.
    pub symmetric_controllers: bool,
}

fn bell(input: usize, alice: usize) -> MeasurementStep {
    MeasurementStep::new(
        MeasurementBasis::Bell,
        vec![Wire::Input(input), Wire::Channel(alice)],
    )
}

fn single(basis: MeasurementBasis, q: usize) -> MeasurementStep {
    MeasurementStep::new(basis, vec![Wire::Channel(q)])
}

fn x_basis_plans(parties: &PartyMap) -> Vec<Vec<MeasurementStep>> {
    parties
        .controllers
        .iter()
        .map(|qs| qs.iter().map(|&q| single(MeasurementBasis::XBasis, q)).collect())
        .collect()
}

fn pairwise_bell(n: usize, parties: &PartyMap) -> Vec<MeasurementStep> {
    (0..n).map(|k| bell(k, parties.alice[k])).collect()
}

impl Scheme {
    pub fn build(id: SchemeId) -> Result<Scheme> {
        match id {
            SchemeId::Ghz => Self::ghz(),
            SchemeId::TwoGhz => Self::two_ghz(),
            SchemeId::NGhz { n, m } => Self::nghz(n, m),
            SchemeId::Yang { n, m, variant } => Self::yang(n, m, variant),
            SchemeId::Man { n, m } => Self::man(n, m),
            SchemeId::Pe4(p) => Self::pe4(p),
            SchemeId::PartialNGhz { n, covered } => Self::partial_nghz(n, covered),
        }
    }

    fn finish(
        id: SchemeId,
        channel: PureState,
        parties: PartyMap,
        sender: Vec<MeasurementStep>,
        controllers: Vec<Vec<MeasurementStep>>,
        symmetric: bool,
    ) -> Result<Scheme> {
        let n = id.teleported_qubits();
        let spec =
            ProtocolSpec::new(channel, parties, n, sender, controllers, Corrections::Derive)?
                .resolved()?;
        Ok(Scheme {
            id,
            spec,
            symmetric_controllers: symmetric,
        })
    }

    pub fn ghz() -> Result<Scheme> {
        let mut s = Self::nghz(1, 1)?;
        s.id = SchemeId::Ghz;
        Ok(s)
    }

    pub fn two_ghz() -> Result<Scheme> {
        let (channel, parties) = two_ghz_channel();
        let sender = pairwise_bell(2, &parties);
        let c = &parties.controllers[0];
        let controller = vec![vec![MeasurementStep::new(
            MeasurementBasis::Bell,
            vec![Wire::Channel(c[0]), Wire::Channel(c[1])],
        )]];
        Self::finish(SchemeId::TwoGhz, channel, parties, sender, controller, false)
    }

    pub fn nghz(n: usize, m: usize) -> Result<Scheme> {
        let (channel, parties) = nghz_channel(n, m)?;
        let sender = pairwise_bell(n, &parties);
        let controllers = x_basis_plans(&parties);
        Self::finish(SchemeId::NGhz { n, m }, channel, parties, sender, controllers, m > 1)
    }

    pub fn yang(n: usize, m: usize, variant: YangVariant) -> Result<Scheme> {
        let (channel, parties) = yang_channel(n, m, variant)?;
        let mut sender = pairwise_bell(n, &parties);
        sender.push(single(MeasurementBasis::XBasis, parties.alice[n]));
        let controllers = x_basis_plans(&parties);
        Self::finish(
            SchemeId::Yang { n, m, variant },
            channel,
            parties,
            sender,
            controllers,
            m > 1,
        )
    }

    pub fn man(n: usize, m: usize) -> Result<Scheme> {
        let (channel, parties) = man_channel(n, m)?;
        let sender = pairwise_bell(n, &parties);
        let controllers = x_basis_plans(&parties);
        Self::finish(SchemeId::Man { n, m }, channel, parties, sender, controllers, m > 1)
    }

    /// The Pauli frame of each outcome does not depend on the amplitudes, so
    /// the table is taken from the full-support channel and then checked on
    /// this one. Outcomes that a zero amplitude rules out keep their entries.
    pub fn pe4(p: Pe4Params) -> Result<Scheme> {
        let plan = |p: Pe4Params| -> Result<ProtocolSpec> {
            let (channel, parties) = pe4_channel(p)?;
            let sender = pairwise_bell(1, &parties);
            let controller = vec![parties.controllers[0]
                .iter()
                .map(|&q| single(MeasurementBasis::Computational, q))
                .collect()];
            ProtocolSpec::new(channel, parties, 1, sender, controller, Corrections::Derive)
        };
        let table = derive_corrections(&plan(Pe4Params::from_squared(0.25, 0.25, 0.25, 0.25)?)?)?;
        let spec = plan(p)?.with_table(table.clone())?;
        verify_table(&spec, &table)?;
        Ok(Scheme {
            id: SchemeId::Pe4(p),
            spec,
            symmetric_controllers: false,
        })
    }

    pub fn partial_nghz(n: usize, covered: usize) -> Result<Scheme> {
        let (channel, parties) = partial_nghz_channel(n, covered)?;
        let sender = pairwise_bell(n, &parties);
        let controllers = x_basis_plans(&parties);
        Self::finish(
            SchemeId::PartialNGhz { n, covered },
            channel,
            parties,
            sender,
            controllers,
            false,
        )
    }

    pub fn n(&self) -> usize {
        self.spec.input_qubits()
    }

    pub fn controller_count(&self) -> usize {
        self.spec.controller_count()
    }
}

/// The maximally-entangled schemes at desk scale: GHZ, 2-GHZ, N-GHZ and
/// Yang for `N ≤ 3, M ≤ 2` (Yang in both variants), Man for `M ≤ N ≤ 3`.
pub fn standard_catalog() -> Vec<SchemeId> {
    let mut ids = vec![SchemeId::Ghz, SchemeId::TwoGhz];
    for n in 1..=3 {
        for m in 1..=2 {
            ids.push(SchemeId::NGhz { n, m });
        }
    }
    for n in 1..=3 {
        for m in 1..=2 {
            for variant in [YangVariant::PhaseFlip, YangVariant::Singlet] {
                ids.push(SchemeId::Yang { n, m, variant });
            }
        }
    }
    for n in 1..=3 {
        for m in 1..=n {
            ids.push(SchemeId::Man { n, m });
        }
    }
    ids
}
