//! Linear entropy inequalities, their gaps, and the full sets of Ingleton
//! instances obtained by relabeling and lifting parties.
//!
//! Ingleton's inequality with roles A, B, C, D reads
//!
//! ```text
//! S_AB + S_AC + S_AD + S_BC + S_BD >= S_A + S_B + S_ABC + S_ABD + S_CD
//! ```
//!
//! and the gap of an instance is LHS − RHS, negative at violation.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::entropy::EntropyVector;
use crate::error::{Error, Result};

/// Gaps below `-VIOLATION_THRESHOLD` count as violations.
pub const VIOLATION_THRESHOLD: f64 = 1e-6;

/// One inequality written as Σ lhs·S ≥ Σ rhs·S over subset masks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityInstance {
    pub n_parties: usize,
    pub lhs: BTreeMap<u64, u32>,
    pub rhs: BTreeMap<u64, u32>,
    pub label: String,
    /// Party masks assigned to A, B, C, D when the instance is an Ingleton form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<[u64; 4]>,
}

impl InequalityInstance {
    /// Builds an instance from signed coefficients; zero terms are dropped.
    pub fn from_signed(n_parties: usize, coeffs: &BTreeMap<u64, i64>, label: impl Into<String>) -> Self {
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (&m, &c) in coeffs {
            match c.signum() {
                1 => {
                    lhs.insert(m, c as u32);
                }
                -1 => {
                    rhs.insert(m, (-c) as u32);
                }
                _ => {}
            }
        }
        InequalityInstance {
            n_parties,
            lhs,
            rhs,
            label: label.into(),
            roles: None,
        }
    }

    /// Collects `lhs` and `rhs` mask lists, cancelling terms on both sides.
    pub fn from_terms(n_parties: usize, lhs: &[u64], rhs: &[u64], label: impl Into<String>) -> Self {
        let mut c = BTreeMap::new();
        for &m in lhs {
            *c.entry(m).or_insert(0) += 1;
        }
        for &m in rhs {
            *c.entry(m).or_insert(0) -= 1;
        }
        Self::from_signed(n_parties, &c, label)
    }

    /// Ingleton with roles given as party masks. Roles must be disjoint and nonempty.
    pub fn ingleton(n_parties: usize, roles: [u64; 4]) -> Result<Self> {
        check_roles(n_parties, &roles)?;
        let [a, b, c, d] = roles;
        let mut inst = Self::from_terms(
            n_parties,
            &[a | b, a | c, a | d, b | c, b | d],
            &[a, b, a | b | c, a | b | d, c | d],
            role_label("ingleton", &roles),
        );
        inst.roles = Some(roles);
        Ok(inst)
    }

    /// Ingleton on four single parties A=0, B=1, C=2, D=3.
    pub fn ingleton_canonical() -> Self {
        Self::ingleton(4, [1, 2, 4, 8]).expect("canonical roles are valid")
    }

    /// Monogamy of mutual information: S_AB + S_AC + S_BC ≥ S_A + S_B + S_C + S_ABC.
    pub fn mmi(n_parties: usize, a: u64, b: u64, c: u64) -> Result<Self> {
        check_roles(n_parties, &[a, b, c])?;
        Ok(Self::from_terms(
            n_parties,
            &[a | b, a | c, b | c],
            &[a, b, c, a | b | c],
            role_label("mmi", &[a, b, c]),
        ))
    }

    /// S_A + S_B ≥ S_AB.
    pub fn subadditivity(n_parties: usize, a: u64, b: u64) -> Result<Self> {
        check_roles(n_parties, &[a, b])?;
        Ok(Self::from_terms(n_parties, &[a, b], &[a | b], role_label("sa", &[a, b])))
    }

    /// S_AB + S_BC ≥ S_B + S_ABC.
    pub fn strong_subadditivity(n_parties: usize, a: u64, b: u64, c: u64) -> Result<Self> {
        check_roles(n_parties, &[a, b, c])?;
        Ok(Self::from_terms(
            n_parties,
            &[a | b, b | c],
            &[b, a | b | c],
            role_label("ssa", &[a, b, c]),
        ))
    }

    /// Coefficients as a signed map: lhs positive, rhs negative.
    pub fn signed(&self) -> BTreeMap<u64, i64> {
        let mut c: BTreeMap<u64, i64> = self.lhs.iter().map(|(&m, &v)| (m, v as i64)).collect();
        for (&m, &v) in &self.rhs {
            *c.entry(m).or_insert(0) -= v as i64;
        }
        c
    }

    /// Signed coefficients sorted by mask; two instances are the same
    /// inequality exactly when these agree.
    pub fn canonical_key(&self) -> Vec<(u64, i64)> {
        self.signed().into_iter().filter(|&(_, c)| c != 0).collect()
    }

    /// Every mask the instance reads.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.lhs.keys().chain(self.rhs.keys()).copied()
    }

    /// Rewrites each S_I as S_Ī (complement within all parties) whenever the
    /// complement is the smaller mask. Exact for pure global states.
    pub fn purity_reduced(&self) -> Self {
        let full = (1u64 << self.n_parties) - 1;
        let mut c = BTreeMap::new();
        for (m, v) in self.signed() {
            let r = (full & !m).min(m);
            if r != 0 {
                *c.entry(r).or_insert(0) += v;
            }
        }
        let mut out = Self::from_signed(self.n_parties, &c, self.label.clone());
        out.roles = self.roles;
        out
    }

    /// LHS − RHS.
    pub fn gap(&self, ev: &EntropyVector) -> Result<f64> {
        let mut g = 0.0;
        for (&m, &c) in &self.lhs {
            g += c as f64 * ev.get(m)?;
        }
        for (&m, &c) in &self.rhs {
            g -= c as f64 * ev.get(m)?;
        }
        Ok(g)
    }

    /// Human-readable `lhs >= rhs` using letters for party bits.
    pub fn pretty(&self) -> String {
        let side = |terms: &BTreeMap<u64, u32>| {
            terms
                .iter()
                .map(|(&m, &c)| {
                    let name = mask_letters(m);
                    if c == 1 { format!("S_{name}") } else { format!("{c}S_{name}") }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} >= {}", side(&self.lhs), side(&self.rhs))
    }
}

fn check_roles(n_parties: usize, roles: &[u64]) -> Result<()> {
    let full = (1u64 << n_parties) - 1;
    let mut seen = 0;
    for &r in roles {
        if r == 0 || r & seen != 0 || r & !full != 0 {
            return Err(Error::InvalidParties);
        }
        seen |= r;
    }
    Ok(())
}

fn mask_letters(mask: u64) -> String {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| {
            if i < 26 { char::from(b'A' + i as u8).to_string() } else { format!("[{i}]") }
        })
        .collect()
}

fn role_label(name: &str, roles: &[u64]) -> String {
    let mut s = format!("{name}(");
    for (i, r) in roles.iter().enumerate() {
        let qs: Vec<String> = (0..64).filter(|b| r >> b & 1 == 1).map(|b| b.to_string()).collect();
        let _ = write!(s, "{}{}={{{}}}", if i > 0 { "," } else { "" }, char::from(b'A' + i as u8), qs.join(","));
    }
    s.push(')');
    s
}

/// Minimum gap over a collection of instances, with the index attaining it.
pub fn min_gap<'a, I>(instances: I, ev: &EntropyVector) -> Result<(usize, f64)>
where
    I: IntoIterator<Item = &'a InequalityInstance>,
{
    let mut best = (usize::MAX, f64::INFINITY);
    for (i, inst) in instances.into_iter().enumerate() {
        let g = inst.gap(ev)?;
        if g < best.1 {
            best = (i, g);
        }
    }
    if best.0 == usize::MAX {
        return Err(Error::InvalidConfig("no instances".into()));
    }
    Ok(best)
}

/// All distinct Ingleton instances over a register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSet {
    pub n_qubits: usize,
    pub purity_assumed: bool,
    pub instances: Vec<InequalityInstance>,
}

impl InstanceSet {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Sorted, deduplicated masks read by any instance.
    pub fn masks(&self) -> Vec<u64> {
        let mut m: Vec<u64> = self.instances.iter().flat_map(|i| i.masks()).collect();
        m.sort_unstable();
        m.dedup();
        m
    }

    pub fn min_gap(&self, ev: &EntropyVector) -> Result<(usize, f64)> {
        min_gap(&self.instances, ev)
    }
}

/// Every assignment of four disjoint nonempty qubit subsets to A, B, C, D,
/// with qubits allowed to stay unassigned, deduplicated by coefficient vector.
///
/// With `purity`, coefficients are first reduced through
/// [`InequalityInstance::purity_reduced`]. Assignments are visited in
/// lexicographic order of (role of qubit 0, role of qubit 1, ...) and the
/// first representative of each class is kept.
pub fn ingleton_instances(n_qubits: usize, purity: bool) -> Result<InstanceSet> {
    if !(4..=8).contains(&n_qubits) {
        return Err(Error::InvalidConfig(format!(
            "instance sets are defined for 4 to 8 qubits, got {n_qubits}"
        )));
    }
    let mut seen = HashSet::new();
    let mut instances = Vec::new();
    let mut roles_of = vec![0usize; n_qubits];
    let total = 5usize.pow(n_qubits as u32);
    for code in 0..total {
        let mut rest = code;
        for q in (0..n_qubits).rev() {
            roles_of[q] = rest % 5;
            rest /= 5;
        }
        let mut roles = [0u64; 4];
        for (q, &r) in roles_of.iter().enumerate() {
            if r < 4 {
                roles[r] |= 1 << q;
            }
        }
        if roles.contains(&0) {
            continue;
        }
        let raw = InequalityInstance::ingleton(n_qubits, roles)?;
        let inst = if purity { raw.purity_reduced() } else { raw };
        if seen.insert(inst.canonical_key()) {
            instances.push(inst);
        }
    }
    Ok(InstanceSet {
        n_qubits,
        purity_assumed: purity,
        instances,
    })
}

/// The three mutual-information terms whose sum is the Ingleton gap:
/// (I(B:C|A), I(A:D|B), R) with R = S_BC + S_AD − S_CD − S_AB.
pub fn mi_rewrite_terms(ev: &EntropyVector, roles: [u64; 4]) -> Result<(f64, f64, f64)> {
    let [a, b, c, d] = roles;
    let s = |m: u64| ev.get(m);
    let i_bc_a = s(a | b)? + s(a | c)? - s(a | b | c)? - s(a)?;
    let i_ad_b = s(a | b)? + s(b | d)? - s(a | b | d)? - s(b)?;
    let r = s(b | c)? + s(a | d)? - s(c | d)? - s(a | b)?;
    Ok((i_bc_a, i_ad_b, r))
}

/// True when S_CD strictly exceeds every other two-role entropy.
pub fn two_party_dominance(ev: &EntropyVector, roles: [u64; 4]) -> Result<bool> {
    let [a, b, c, d] = roles;
    let cd = ev.get(c | d)?;
    for m in [a | b, a | c, a | d, b | c, b | d] {
        if ev.get(m)? >= cd {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reward for a single instance: RHS − LHS.
pub fn difference(instance: &InequalityInstance, ev: &EntropyVector) -> Result<f64> {
    Ok(-instance.gap(ev)?)
}
