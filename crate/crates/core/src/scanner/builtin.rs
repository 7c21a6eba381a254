use super::family::{FamilySpec, MatrixFamily};

const SOURCES: [(&str, &str); 8] = [
    ("nilpotent_zw", include_str!("../../families/nilpotent_zw.json")),
    ("pm_zeta", include_str!("../../families/pm_zeta.json")),
    ("sqrt_zeta", include_str!("../../families/sqrt_zeta.json")),
    ("diag_zz1", include_str!("../../families/diag_zz1.json")),
    ("j3split", include_str!("../../families/j3split.json")),
    ("const_j2", include_str!("../../families/const_j2.json")),
    ("identity3", include_str!("../../families/identity3.json")),
    ("zero2", include_str!("../../families/zero2.json")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(name, _)| *name)
}

/// Shipped family by name.
pub fn builtin(name: &str) -> Option<MatrixFamily> {
    let (_, text) = SOURCES.iter().find(|(n, _)| *n == name)?;
    let spec: FamilySpec = serde_json::from_str(text).expect("built-in family is valid JSON");
    Some(MatrixFamily::from_spec(&spec).expect("built-in family parses"))
}

pub fn builtin_families() -> Vec<MatrixFamily> {
    builtin_names().filter_map(builtin).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_load() {
        let all = builtin_families();
        assert_eq!(all.len(), SOURCES.len());
        for f in &all {
            assert!(f.label.is_some());
        }
        assert!(builtin("nope").is_none());
    }
}
