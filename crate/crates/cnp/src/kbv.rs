//! Best known values for the standard benchmark collections, bundled into
//! the binary so the harness can report gaps without external files.
//!
//! Lookup is tolerant of file names: it normalizes to lowercase
//! alphanumerics and falls back from exact match to unique prefix to unique
//! substring, which absorbs extensions and collection-specific prefixes
//! (`BA500.txt`, `CA-GrQc.txt`, ...).

use std::sync::OnceLock;

/// Reference row for the fixed-budget problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnpReference {
    pub name: &'static str,
    pub k: usize,
    pub best: u64,
}

/// Reference row for the capped-component problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcReference {
    pub name: &'static str,
    pub cap: u32,
    pub best_k: usize,
}

static CNP_CSV: &str = include_str!("../data/kbv_cnp.csv");
static CC_CSV: &str = include_str!("../data/kbv_cccnp.csv");

fn data_rows(csv: &'static str) -> impl Iterator<Item = [&'static str; 3]> {
    csv.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split(',');
            let row = [
                it.next().expect("name column").trim(),
                it.next().expect("second column").trim(),
                it.next().expect("third column").trim(),
            ];
            assert!(
                it.next().is_none(),
                "unexpected extra column in reference data"
            );
            row
        })
}

pub fn all_cnp_references() -> &'static [CnpReference] {
    static ROWS: OnceLock<Vec<CnpReference>> = OnceLock::new();
    ROWS.get_or_init(|| {
        data_rows(CNP_CSV)
            .map(|[name, k, best]| CnpReference {
                name,
                k: k.parse().expect("budget column"),
                best: best.parse().expect("objective column"),
            })
            .collect()
    })
}

pub fn all_cc_references() -> &'static [CcReference] {
    static ROWS: OnceLock<Vec<CcReference>> = OnceLock::new();
    ROWS.get_or_init(|| {
        data_rows(CC_CSV)
            .map(|[name, cap, best_k]| CcReference {
                name,
                cap: cap.parse().expect("cap column"),
                best_k: best_k.parse().expect("budget column"),
            })
            .collect()
    })
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

/// Finds the row whose normalized name matches `query` exactly, or is a
/// prefix of it, or occurs inside it. When several rows match a stage the
/// longest name wins (so `BA5000` beats `BA500`); a length tie is ambiguous.
fn lookup<'a, T>(rows: &'a [T], name_of: impl Fn(&T) -> &str, query: &str) -> Option<&'a T> {
    let q = normalize(query);
    if q.is_empty() {
        return None;
    }
    if let Some(row) = rows.iter().find(|r| normalize(name_of(r)) == q) {
        return Some(row);
    }
    for stage in [
        (|row: &str, q: &str| q.starts_with(row)) as fn(&str, &str) -> bool,
        |row, q| q.contains(row),
    ] {
        let hits: Vec<&T> = rows
            .iter()
            .filter(|r| stage(&normalize(name_of(r)), &q))
            .collect();
        if let Some(&best) = hits.iter().max_by_key(|r| normalize(name_of(r)).len()) {
            let best_len = normalize(name_of(best)).len();
            if hits
                .iter()
                .filter(|r| normalize(name_of(r)).len() == best_len)
                .count()
                == 1
            {
                return Some(best);
            }
            return None;
        }
    }
    None
}

/// Reference row for a fixed-budget instance, by (file) name.
pub fn cnp_reference(name: &str) -> Option<&'static CnpReference> {
    lookup(all_cnp_references(), |r| r.name, name)
}

/// Reference row for a capped-component instance, by (file) name.
pub fn cc_reference(name: &str) -> Option<&'static CcReference> {
    lookup(all_cc_references(), |r| r.name, name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_complete() {
        assert_eq!(all_cnp_references().len(), 42);
        assert_eq!(all_cc_references().len(), 42);
    }

    #[test]
    fn known_rows_resolve() {
        let r = cnp_reference("BA500").unwrap();
        assert_eq!((r.k, r.best), (50, 195));
        let r = cnp_reference("er235").unwrap();
        assert_eq!((r.k, r.best), (50, 295));
        let r = cnp_reference("ER2344").unwrap();
        assert_eq!((r.k, r.best), (200, 959_500));
        let r = cc_reference("BA1000").unwrap();
        assert_eq!((r.cap, r.best_k), (5, 61));
    }

    #[test]
    fn file_names_resolve_through_normalization() {
        assert_eq!(cnp_reference("FF250.txt").unwrap().best, 194);
        assert_eq!(cnp_reference("BA500.txt").unwrap().best, 195);
        assert_eq!(cnp_reference("BA5000.txt").unwrap().best, 10_196);
        assert_eq!(cnp_reference("CA-GrQc.txt").unwrap().best, 13_736);
        assert_eq!(cnp_reference("CA-CondMat.txt").unwrap().best, 2_298_596);
        assert_eq!(cnp_reference("openflights.txt").unwrap().best, 28_671);
        assert!(cnp_reference("no-such-instance").is_none());
        assert!(cnp_reference("").is_none());
    }
}
