//! Congruence decision procedures for `ℤ_m`, `D_m`, `ℤ_r × ℤ_s` and `(ℤ_r × ℤ_s) ⋉ ℤ_2`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("n must be at least 3, got {0}")]
    NTooSmall(u64),
    #[error("m must be at least 2, got {0}")]
    MTooSmall(u64),
    #[error("unsupported group {0}")]
    UnsupportedGroup(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { m: u64 },
    Dihedral { m: u64 },
    Product { r: u64, s: u64 },
    SemidirectProduct { r: u64, s: u64 },
}

impl GroupSpec {
    /// Abstract group order.
    pub fn order(self) -> u64 {
        match self {
            GroupSpec::Cyclic { m } => m,
            GroupSpec::Dihedral { m } => 2 * m,
            GroupSpec::Product { r, s } => r * s,
            GroupSpec::SemidirectProduct { r, s } => 2 * r * s,
        }
    }

    pub fn classify(self, n: u64) -> Result<ClassificationVerdict, ClassifyError> {
        match self {
            GroupSpec::Cyclic { m } | GroupSpec::Dihedral { m } => classify_cyclic_dihedral(n, m),
            GroupSpec::Product { r, s } => classify_product(n, r, s, false),
            GroupSpec::SemidirectProduct { r, s } => classify_product(n, r, s, true),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { m } => write!(f, "Z{m}"),
            GroupSpec::Dihedral { m } => write!(f, "D{m}"),
            GroupSpec::Product { r, s } => write!(f, "Z{r}xZ{s}"),
            GroupSpec::SemidirectProduct { r, s } => write!(f, "(Z{r}xZ{s})xZ2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Containment {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equality {
    Yes,
    Open,
    No,
    NotApplicable,
}

/// C1–C3 are the cyclic/dihedral conditions, P1–P4 the product conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    C1,
    C2,
    C3,
    P1,
    P2,
    P3,
    P4,
}

impl Condition {
    pub fn statement(self) -> &'static str {
        match self {
            Condition::C1 => "n ≡ 0, 1, 2 (mod m)",
            Condition::C2 => "m even and n ≡ 0 (mod m/2)",
            Condition::C3 => "4 | m and n ≡ 2 (mod m/2)",
            Condition::P1 => "n ≡ 0 (mod s)",
            Condition::P2 => "r = 2 and n ≡ 2 (mod 2s)",
            Condition::P3 => "r = 2, 4 | s and n ≡ s + 2 (mod 2s)",
            Condition::P4 => "r = 4 and n ≡ 2 (mod 2s)",
        }
    }

    /// Human label, e.g. "cyclic/dihedral condition (2)".
    pub fn label(self) -> String {
        let (family, k) = match self {
            Condition::C1 => ("cyclic/dihedral", 1),
            Condition::C2 => ("cyclic/dihedral", 2),
            Condition::C3 => ("cyclic/dihedral", 3),
            Condition::P1 => ("product", 1),
            Condition::P2 => ("product", 2),
            Condition::P3 => ("product", 3),
            Condition::P4 => ("product", 4),
        };
        format!("{family} condition ({k})")
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub containment: Containment,
    pub equality: Equality,
    pub matched_conditions: Vec<Condition>,
    pub normalization_note: Option<String>,
    /// The group whose conditions actually answered the query, when it differs from the one asked.
    pub delegated_to: Option<GroupSpec>,
}

impl ClassificationVerdict {
    fn from_conditions(matched: Vec<Condition>) -> Self {
        let yes = !matched.is_empty();
        ClassificationVerdict {
            containment: if yes { Containment::Yes } else { Containment::No },
            equality: if yes { Equality::Yes } else { Equality::No },
            matched_conditions: matched,
            normalization_note: None,
            delegated_to: None,
        }
    }

    pub fn contains(&self) -> bool {
        self.containment == Containment::Yes
    }
}

/// `ℤ_r × ℤ_s ≅ ℤ_gcd × ℤ_lcm`.
pub fn normalize_rs(r: u64, s: u64) -> (u64, u64, Option<String>) {
    let g = r.gcd(&s);
    let l = r.lcm(&s);
    let note = if g == 1 {
        Some(format!("Z{r}xZ{s} = Z1xZ{l} reduces to cyclic Z{l}"))
    } else if (g, l) != (r, s) {
        Some(format!("Z{r}xZ{s} rewritten as Z{g}xZ{l}"))
    } else {
        None
    };
    (g, l, note)
}

pub fn classify_cyclic_dihedral(n: u64, m: u64) -> Result<ClassificationVerdict, ClassifyError> {
    if n < 3 {
        return Err(ClassifyError::NTooSmall(n));
    }
    if m < 2 {
        return Err(ClassifyError::MTooSmall(m));
    }
    let mut matched = Vec::new();
    if n % m <= 2 {
        matched.push(Condition::C1);
    }
    if m % 2 == 0 && n % (m / 2) == 0 {
        matched.push(Condition::C2);
    }
    if m % 4 == 0 && n % (m / 2) == 2 % (m / 2) {
        matched.push(Condition::C3);
    }
    Ok(ClassificationVerdict::from_conditions(matched))
}

pub fn classify_product(n: u64, r: u64, s: u64, semidirect: bool) -> Result<ClassificationVerdict, ClassifyError> {
    if n < 3 {
        return Err(ClassifyError::NTooSmall(n));
    }
    if r == 0 || s == 0 {
        return Err(ClassifyError::MTooSmall(0));
    }
    let (r, s, note) = normalize_rs(r, s);
    let delegate = if r == 1 {
        Some(if semidirect { GroupSpec::Dihedral { m: s } } else { GroupSpec::Cyclic { m: s } })
    } else if (r, s) == (2, 2) {
        if semidirect {
            return Err(ClassifyError::UnsupportedGroup("(Z2xZ2)xZ2".to_string()));
        }
        Some(GroupSpec::Dihedral { m: 2 })
    } else {
        None
    };
    if let Some(target) = delegate {
        let (GroupSpec::Cyclic { m } | GroupSpec::Dihedral { m }) = target else { unreachable!() };
        let mut verdict = classify_cyclic_dihedral(n, m)?;
        verdict.normalization_note =
            Some(note.unwrap_or_else(|| format!("answered by the cyclic/dihedral conditions for {target}")));
        verdict.delegated_to = Some(target);
        return Ok(verdict);
    }

    let mut matched = Vec::new();
    if n % s == 0 {
        matched.push(Condition::P1);
    }
    if r == 2 && n % (2 * s) == 2 % (2 * s) {
        matched.push(Condition::P2);
    }
    if r == 2 && s % 4 == 0 && n % (2 * s) == (s + 2) % (2 * s) {
        matched.push(Condition::P3);
    }
    if r == 4 && n % (2 * s) == 2 % (2 * s) {
        matched.push(Condition::P4);
    }
    let mut verdict = ClassificationVerdict::from_conditions(matched);
    verdict.normalization_note = note;
    if verdict.contains() && is_open(n, r, s, semidirect) {
        verdict.equality = Equality::Open;
    }
    Ok(verdict)
}

/// The unresolved equality cases, for normalized `r | s`.
fn is_open(n: u64, r: u64, s: u64, semidirect: bool) -> bool {
    let small_multiple = n % s == 0 && (1..2 * r).contains(&(n / s));
    small_multiple || (semidirect && matches!((n, r, s), (6, 2, 4) | (10, 4, 4)))
}

pub fn enumerate_groups(n: u64, max_order: u64) -> Result<Vec<(GroupSpec, ClassificationVerdict)>, ClassifyError> {
    if n < 3 {
        return Err(ClassifyError::NTooSmall(n));
    }
    if max_order < 2 {
        return Err(ClassifyError::MTooSmall(max_order));
    }
    let mut specs = Vec::new();
    for m in 2..=max_order {
        specs.push(GroupSpec::Cyclic { m });
        specs.push(GroupSpec::Dihedral { m });
    }
    for s in 3..=max_order {
        for r in (2..=s).filter(|r| s % r == 0) {
            specs.push(GroupSpec::Product { r, s });
            specs.push(GroupSpec::SemidirectProduct { r, s });
        }
    }
    specs.sort();
    specs.into_iter().map(|g| Ok((g, g.classify(n)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_rs(2, 4), (2, 4, None));
        let (r, s, note) = normalize_rs(6, 4);
        assert_eq!((r, s), (2, 12));
        assert!(note.is_some());
        let (r, s, note) = normalize_rs(1, 5);
        assert_eq!((r, s), (1, 5));
        assert!(note.unwrap().contains("reduces to cyclic"));
    }

    #[test]
    fn cyclic_examples() {
        let v = classify_cyclic_dihedral(7, 7).unwrap();
        assert_eq!(v.matched_conditions, vec![Condition::C1]);
        let v = classify_cyclic_dihedral(4, 8).unwrap();
        assert!(v.matched_conditions.contains(&Condition::C2));
        let v = classify_cyclic_dihedral(5, 6).unwrap();
        assert_eq!(v.containment, Containment::No);
        assert_eq!(v.equality, Equality::No);
        assert_eq!(classify_cyclic_dihedral(2, 3), Err(ClassifyError::NTooSmall(2)));
        assert_eq!(classify_cyclic_dihedral(3, 1), Err(ClassifyError::MTooSmall(1)));
    }

    #[test]
    fn m_two_always_contained() {
        for n in 3..50 {
            assert!(classify_cyclic_dihedral(n, 2).unwrap().contains());
        }
    }

    #[test]
    fn product_examples() {
        let v = classify_product(6, 2, 4, true).unwrap();
        assert_eq!(v.matched_conditions, vec![Condition::P3]);
        assert_eq!(v.equality, Equality::Open);
        let v = classify_product(6, 2, 4, false).unwrap();
        assert_eq!(v.equality, Equality::Yes);
        let v = classify_product(16, 2, 4, false).unwrap();
        assert_eq!(v.matched_conditions, vec![Condition::P1]);
        assert_eq!(v.equality, Equality::Yes);
        let v = classify_product(7, 2, 4, false).unwrap();
        assert_eq!(v.containment, Containment::No);
        let v = classify_product(10, 4, 4, true).unwrap();
        assert_eq!((v.matched_conditions.clone(), v.equality), (vec![Condition::P4], Equality::Open));
        assert_eq!(classify_product(10, 4, 4, false).unwrap().equality, Equality::Yes);
    }

    #[test]
    fn delegation() {
        let v = classify_product(5, 1, 5, false).unwrap();
        assert_eq!(v.delegated_to, Some(GroupSpec::Cyclic { m: 5 }));
        assert!(v.contains());
        let v = classify_product(5, 2, 2, false).unwrap();
        assert_eq!(v.delegated_to, Some(GroupSpec::Dihedral { m: 2 }));
        assert!(v.normalization_note.is_some());
        assert!(matches!(classify_product(5, 2, 2, true), Err(ClassifyError::UnsupportedGroup(_))));
        let v = classify_product(12, 6, 4, false).unwrap();
        assert_eq!(v.normalization_note.as_deref(), Some("Z6xZ4 rewritten as Z2xZ12"));
        assert_eq!(v.matched_conditions, vec![Condition::P1]);
    }

    #[test]
    fn enumerate_examples() {
        let rows = enumerate_groups(3, 6).unwrap();
        let cyclic = |m| rows.iter().find(|(g, _)| *g == GroupSpec::Cyclic { m }).unwrap().1.contains();
        assert!(cyclic(2) && cyclic(3) && cyclic(6));
        assert!(!cyclic(4) && !cyclic(5));

        let rows = enumerate_groups(4, 4).unwrap();
        let (_, v) = rows.iter().find(|(g, _)| *g == GroupSpec::Product { r: 2, s: 4 }).unwrap();
        assert_eq!((v.containment, v.equality), (Containment::Yes, Equality::Open));

        let rows = enumerate_groups(3, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|(_, v)| v.contains()));
    }

    #[test]
    fn p1_excludes_p2_p3() {
        for s in (4..=24u64).step_by(2) {
            for n in 3..=4 * s * s {
                let c = classify_product(n, 2, s, false).unwrap().matched_conditions;
                assert!(!(c.contains(&Condition::P1) && (c.contains(&Condition::P2) || c.contains(&Condition::P3))));
            }
        }
    }
}
