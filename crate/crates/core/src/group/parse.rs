use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GroupError};

/// On-disk Cayley table: `table[a][b]` is the index of `a*b`, identity at `0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CayleyDocument {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

pub fn parse_cayley_document(json: &str) -> Result<FiniteGroup, GroupError> {
    let doc: CayleyDocument = serde_json::from_str(json)?;
    if doc.table.len() != doc.order {
        return Err(GroupError::Malformed(format!(
            "order is {} but table has {} rows",
            doc.order,
            doc.table.len()
        )));
    }
    FiniteGroup::from_table(doc.name, &doc.table)
}

/// Builds a group from a short spec such as `C2`, `S3`, `D4`, `V4`,
/// `trivial`, `C2xC3` or `C2^3`.
pub fn make_group(spec: &str) -> Result<FiniteGroup, GroupError> {
    let bad = || GroupError::BadSpec(spec.to_string());
    let factors: Vec<&str> = spec
        .split(['x', '×', '*'])
        .map(|f| f.trim().trim_start_matches('(').trim_end_matches(')').trim())
        .collect();
    if factors.iter().any(|f| f.is_empty()) {
        return Err(bad());
    }
    let mut acc: Option<FiniteGroup> = None;
    for f in &factors {
        let g = power_factor(f).ok_or_else(bad)??;
        acc = Some(match acc {
            None => g,
            Some(a) => a.direct_product(&g)?,
        });
    }
    let mut g = acc.ok_or_else(bad)?;
    if factors.len() > 1 {
        g.set_name(factors.join("x"));
    }
    Ok(g)
}

fn power_factor(f: &str) -> Option<Result<FiniteGroup, GroupError>> {
    let (head, exp) = match f.split_once('^') {
        Some((h, e)) => (h.trim(), e.trim().parse::<usize>().ok().filter(|&e| e >= 1)?),
        None => (f, 1),
    };
    let base = match basic_factor(head)? {
        Ok(g) => g,
        Err(e) => return Some(Err(e)),
    };
    let mut g = base.clone();
    for _ in 1..exp {
        g = match g.direct_product(&base) {
            Ok(p) => p,
            Err(e) => return Some(Err(e)),
        };
    }
    if exp > 1 {
        g.set_name(format!("{}^{exp}", base.name()));
    }
    Some(Ok(g))
}

fn basic_factor(f: &str) -> Option<Result<FiniteGroup, GroupError>> {
    let lower = f.to_ascii_lowercase();
    match lower.as_str() {
        "trivial" | "1" | "c1" | "z1" => return Some(Ok(FiniteGroup::trivial())),
        "v4" | "klein" => return Some(FiniteGroup::klein()),
        _ => {}
    }
    let (family, digits) = lower.split_at(1);
    let k: usize = digits.parse().ok()?;
    if k == 0 {
        return None;
    }
    Some(match family {
        "c" | "z" => FiniteGroup::cyclic(k),
        "s" => FiniteGroup::symmetric(k),
        "a" => FiniteGroup::alternating(k),
        "d" => FiniteGroup::dihedral(k),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        for (spec, order) in [
            ("C2", 2),
            ("Z5", 5),
            ("S3", 6),
            ("A4", 12),
            ("D4", 8),
            ("V4", 4),
            ("klein", 4),
            ("trivial", 1),
            ("1", 1),
            ("C2xC3", 6),
            ("C2 × S3", 12),
            ("(C2)x(C2)", 4),
            ("C2^3", 8),
        ] {
            assert_eq!(make_group(spec).unwrap().order(), order, "{spec}");
        }
        for bad in ["", "Q8", "C", "C0", "x", "C2x", "S9"] {
            assert!(make_group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cayley_document_round_trip() {
        let json = r#"{"name":"C3","order":3,"table":[[0,1,2],[1,2,0],[2,0,1]]}"#;
        let g = parse_cayley_document(json).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(2, 2), 1);
        let bad = r#"{"name":"x","order":2,"table":[[0,1],[1,1]]}"#;
        assert!(parse_cayley_document(bad).is_err());
        assert!(parse_cayley_document("{").is_err());
    }
}
