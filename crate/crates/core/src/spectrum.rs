//! Necessary conditions on the order of a G-design, and the per-snark
//! checklist of the nine ingredient decompositions that settle the spectrum
//! for 24-vertex cubic graphs.
//!
//! For a `d`-regular graph with `e` edges, a design of order `n` needs
//! `d | n - 1` (every vertex of `K_n` has degree `n - 1`, used `d` at a time)
//! and `2e | n(n - 1)` (the blocks partition `n(n - 1)/2` edges). Both depend
//! only on `n mod lcm(2e, d)`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::SnarkId;
use crate::design::{verify_design, DesignRecord};
use crate::host::{HostDecl, LayoutId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("inconsistent parameters: 2e = {twice_edges} but d*v = {degree_sum}")]
    InconsistentParams { twice_edges: u64, degree_sum: u64 },
    #[error("parameters must be positive")]
    NonPositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignParams {
    v: u64,
    e: u64,
    d: u64,
}

impl DesignParams {
    pub fn new(v: u64, e: u64, d: u64) -> Result<DesignParams, SpectrumError> {
        if v == 0 || e == 0 || d == 0 {
            return Err(SpectrumError::NonPositive);
        }
        if 2 * e != d * v {
            return Err(SpectrumError::InconsistentParams { twice_edges: 2 * e, degree_sum: d * v });
        }
        Ok(DesignParams { v, e, d })
    }

    pub fn vertices(&self) -> u64 {
        self.v
    }

    pub fn edges(&self) -> u64 {
        self.e
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    /// Both divisibility conditions for order `n`.
    pub fn admits(&self, n: u64) -> bool {
        n >= 1 && (n - 1).is_multiple_of(self.d) && (n * (n - 1)).is_multiple_of(2 * self.e)
    }

    /// The period after which the conditions repeat.
    pub fn period(&self) -> u64 {
        lcm(2 * self.e, self.d)
    }

    /// Orders known to satisfy the conditions while admitting no design.
    pub fn known_exceptions(&self) -> &'static [u64] {
        match (self.v, self.e, self.d) {
            (20, 30, 3) => &[16],
            _ => &[],
        }
    }
}

/// A set of residues modulo the smallest modulus that describes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueSpectrum {
    pub modulus: u64,
    pub residues: Vec<u64>,
    /// Admissible orders for which designs are known not to exist.
    pub exceptions: Vec<u64>,
}

impl ResidueSpectrum {
    pub fn contains(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.modulus)).is_ok()
    }
}

impl fmt::Display for ResidueSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "mod {}: {}", self.modulus, list.join(", "))?;
        for n in &self.exceptions {
            write!(f, " (n != {n})")?;
        }
        Ok(())
    }
}

pub fn admissible_residues(params: &DesignParams) -> ResidueSpectrum {
    let period = params.period();
    let admitted: Vec<bool> = (0..period).map(|r| params.admits(r + period)).collect();
    let modulus = (1..=period)
        .filter(|m| period.is_multiple_of(*m))
        .find(|&m| (0..period).all(|r| admitted[r as usize] == admitted[(r % m) as usize]))
        .expect("the period itself always works");
    let residues = (0..modulus).filter(|&r| admitted[r as usize]).collect();
    ResidueSpectrum { modulus, residues, exceptions: params.known_exceptions().to_vec() }
}

/// The nine decompositions required per snark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Ingredient {
    K64,
    K73,
    K136,
    K145,
    K12x3,
    K24_24_15,
    K72_72_63,
    K24x4,
    K24x3_21,
}

impl Ingredient {
    pub const ALL: [Ingredient; 9] = [
        Ingredient::K64,
        Ingredient::K73,
        Ingredient::K136,
        Ingredient::K145,
        Ingredient::K12x3,
        Ingredient::K24_24_15,
        Ingredient::K72_72_63,
        Ingredient::K24x4,
        Ingredient::K24x3_21,
    ];

    pub fn host(self) -> HostDecl {
        match self {
            Ingredient::K64 => HostDecl::Complete { n: 64, infinity: true },
            Ingredient::K73 => HostDecl::Complete { n: 73, infinity: false },
            Ingredient::K136 => HostDecl::Complete { n: 136, infinity: true },
            Ingredient::K145 => HostDecl::Complete { n: 145, infinity: false },
            Ingredient::K12x3 => HostDecl::Named(LayoutId::K12x3),
            Ingredient::K24_24_15 => HostDecl::Named(LayoutId::K24_24_15),
            Ingredient::K72_72_63 => HostDecl::Named(LayoutId::K72_72_63),
            Ingredient::K24x4 => HostDecl::Named(LayoutId::K24x4),
            Ingredient::K24x3_21 => HostDecl::Named(LayoutId::K24x3_21),
        }
    }

    /// Directory name under `data/designs/`.
    pub fn host_id(self) -> &'static str {
        match self {
            Ingredient::K64 => "k64",
            Ingredient::K73 => "k73",
            Ingredient::K136 => "k136",
            Ingredient::K145 => "k145",
            Ingredient::K12x3 => LayoutId::K12x3.as_str(),
            Ingredient::K24_24_15 => LayoutId::K24_24_15.as_str(),
            Ingredient::K72_72_63 => LayoutId::K72_72_63.as_str(),
            Ingredient::K24x4 => LayoutId::K24x4.as_str(),
            Ingredient::K24x3_21 => LayoutId::K24x3_21.as_str(),
        }
    }

    /// Matches a host declaration. `K_64` and `K_136` are only accepted in
    /// their point-at-infinity form, the others only without.
    pub fn for_host(decl: &HostDecl) -> Option<Ingredient> {
        Ingredient::ALL.into_iter().find(|i| i.host() == *decl)
    }
}

impl fmt::Display for Ingredient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.host_id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SlotStatus {
    Verified { record: String },
    Missing,
    Failed { record: String, reason: String },
}

impl SlotStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, SlotStatus::Verified { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub snark: String,
    pub slots: BTreeMap<Ingredient, SlotStatus>,
}

impl LedgerRow {
    pub fn complete(&self) -> bool {
        self.slots.values().all(SlotStatus::is_verified)
    }
}

/// Fills the nine ingredient slots for one snark from a set of records.
///
/// A slot is `Verified` if any matching record passes, `Failed` if matching
/// records exist but none pass, and `Missing` otherwise.
pub fn ingredient_status(snark: SnarkId, db: &[DesignRecord]) -> LedgerRow {
    let slots = Ingredient::ALL
        .into_iter()
        .map(|ingredient| {
            let candidates: Vec<&DesignRecord> = db
                .iter()
                .filter(|r| r.snark == snark && Ingredient::for_host(r.host.decl()) == Some(ingredient))
                .collect();
            let mut status = SlotStatus::Missing;
            for record in candidates {
                let report = verify_design(record);
                if report.pass {
                    status = SlotStatus::Verified { record: record.id.clone() };
                    break;
                }
                let reason = report
                    .failure
                    .unwrap_or_else(|| format!("{} edges not covered exactly once", report.violation_total));
                status = SlotStatus::Failed { record: record.id.clone(), reason };
            }
            (ingredient, status)
        })
        .collect();
    LedgerRow { snark: snark.to_string(), slots }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub pass: bool,
    pub spectrum: ResidueSpectrum,
    pub spectrum_ok: bool,
    pub rows: Vec<LedgerRow>,
    /// Human-readable problems, in snark order.
    pub problems: Vec<String>,
    pub statement: String,
}

/// Checks the ledger for all 38 catalog snarks.
pub fn theorem_check(db: &[DesignRecord]) -> TheoremReport {
    let all: Vec<SnarkId> = SnarkId::all().collect();
    theorem_check_for(db, &all)
}

/// Checks the ledger for the given snarks. Fails unless every one of the 38
/// catalog snarks is listed and fully verified and the residue set for
/// `(24, 36, 3)` is `{1, 64} mod 72`.
pub fn theorem_check_for(db: &[DesignRecord], snarks: &[SnarkId]) -> TheoremReport {
    let params = DesignParams::new(24, 36, 3).expect("cubic on 24 vertices");
    let spectrum = admissible_residues(&params);
    let spectrum_ok = spectrum.modulus == 72 && spectrum.residues == [1, 64];

    let rows: Vec<LedgerRow> = snarks.par_iter().map(|&s| ingredient_status(s, db)).collect();
    let mut problems = Vec::new();
    if !spectrum_ok {
        problems.push(format!("necessary conditions give {spectrum}, expected mod 72: 1, 64"));
    }
    for id in SnarkId::all() {
        if !snarks.contains(&id) {
            problems.push(format!("{id}: not covered"));
        }
    }
    for row in &rows {
        for (ingredient, status) in &row.slots {
            match status {
                SlotStatus::Verified { .. } => {}
                SlotStatus::Missing => problems.push(format!("{} {ingredient}: missing", row.snark)),
                SlotStatus::Failed { record, reason } => {
                    problems.push(format!("{} {ingredient}: {record} failed ({reason})", row.snark))
                }
            }
        }
    }
    let pass = problems.is_empty();
    let statement = if pass {
        format!(
            "all {} snarks have verified decompositions of K_64, K_73, K_136, K_145, K_12,12,12, \
             K_24,24,15, K_72,72,63, K_24,24,24,24 and K_24,24,24,21; designs of order n exist \
             exactly when n mod {} is one of {}",
            rows.len(),
            spectrum.modulus,
            spectrum.residues.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        )
    } else {
        format!("ingredient check failed with {} problem(s)", problems.len())
    };
    TheoremReport { pass, spectrum, spectrum_ok, rows, problems, statement }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectrum(v: u64, e: u64, d: u64) -> (u64, Vec<u64>) {
        let s = admissible_residues(&DesignParams::new(v, e, d).unwrap());
        (s.modulus, s.residues)
    }

    #[test]
    fn published_spectra() {
        assert_eq!(spectrum(24, 36, 3), (72, vec![1, 64]));
        assert_eq!(spectrum(10, 15, 3), (15, vec![1, 10]));
        assert_eq!(spectrum(18, 27, 3), (27, vec![1]));
        assert_eq!(spectrum(20, 30, 3), (60, vec![1, 16, 25, 40]));
        assert_eq!(spectrum(22, 33, 3), (33, vec![1, 22]));
    }

    #[test]
    fn exceptions_are_reported_not_computed() {
        let s = admissible_residues(&DesignParams::new(20, 30, 3).unwrap());
        assert_eq!(s.exceptions, vec![16]);
        assert!(s.contains(16));
        assert_eq!(s.to_string(), "mod 60: 1, 16, 25, 40 (n != 16)");
    }

    #[test]
    fn bad_params() {
        assert_eq!(
            DesignParams::new(24, 35, 3),
            Err(SpectrumError::InconsistentParams { twice_edges: 70, degree_sum: 72 })
        );
        assert_eq!(DesignParams::new(0, 0, 3), Err(SpectrumError::NonPositive));
    }

    #[test]
    fn ingredient_orders_are_admissible() {
        let s = admissible_residues(&DesignParams::new(24, 36, 3).unwrap());
        for n in [64, 73, 136, 145] {
            assert!(s.contains(n), "{n}");
        }
    }

    #[test]
    fn ingredient_hosts() {
        assert_eq!(Ingredient::for_host(&HostDecl::Complete { n: 64, infinity: true }), Some(Ingredient::K64));
        assert_eq!(Ingredient::for_host(&HostDecl::Complete { n: 64, infinity: false }), None);
        assert_eq!(Ingredient::for_host(&HostDecl::Named(LayoutId::K24x4)), Some(Ingredient::K24x4));
    }
}
