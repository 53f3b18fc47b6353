//! Diagram tables for the supported families.
//!
//! Each entry is a diagram template; families indexed by `m` keep `m` as a
//! symbolic label on the edge `5 — 6`.

use crate::diagram_core::{parse_template, CoxeterSystem, DiagramTemplate, Order};
use crate::error::{Error, Result};

/// Identifiers accepted by [`table`].
pub const TABLE_IDS: [&str; 8] = ["cox_gp", "ex1A", "ex1B", "ex1C", "ex1D", "ex2", "mix", "circle"];

/// One named diagram of a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableEntry {
    /// Short name such as `"W1"` or `"A2(k=4,l=3)"`.
    pub name: String,
    /// Diagram text.
    pub text: String,
}

impl TableEntry {
    fn new(name: impl Into<String>, text: impl Into<String>) -> Self {
        Self { name: name.into(), text: text.into() }
    }

    /// Parsed template.
    pub fn template(&self) -> DiagramTemplate {
        parse_template(&self.text).expect("table diagrams parse")
    }

    /// Whether the entry depends on `m`.
    pub fn has_m(&self) -> bool {
        self.template().unbound().contains("m")
    }

    /// The concrete system at `m` (ignored when the entry has no `m`).
    pub fn at(&self, m: Order) -> Result<CoxeterSystem> {
        let t = self.template();
        if t.unbound().contains("m") {
            t.bind_one("m", m)
        } else {
            t.bind(&Default::default())
        }
    }
}

const TRIANGLE: &str = "1-2; 2-3; 1-3";
const TAIL_TRIANGLE: &str = "4-5; 5-6; 4-6; 3-4";

/// Text of `W^i` for `i ∈ {1, 2, 3}` with symbolic `m`.
pub fn cox_gp_text(i: u8) -> Result<String> {
    let j = match i {
        1 | 3 => 3,
        2 => 5,
        _ => return Err(Error::UnsupportedFamily(format!("no family W{i}"))),
    };
    let mut s = format!("nodes 1..6; {TRIANGLE}; 3-4:{j}; 4-5; 5-6:m");
    if i == 3 {
        s.push_str("; 4-6");
    }
    Ok(s)
}

/// Template of `W^i`.
pub fn cox_gp(i: u8) -> Result<DiagramTemplate> {
    parse_template(&cox_gp_text(i)?)
}

/// Text of the `U` diagram.
pub const U_DIAGRAM: &str = "nodes 1..6; 1-2:4; 2-3; 1-3; 3-4:5; 4-5; 5-6:4; 4-6";
/// Text of the `V` diagram.
pub const V_DIAGRAM: &str = "nodes 1..6; 1-2; 2-3:4; 1-3; 3-4; 4-5:4; 5-6; 4-6";

/// Entries of a table by identifier.
pub fn table(id: &str) -> Result<Vec<TableEntry>> {
    let mut out = Vec::new();
    match id {
        "cox_gp" => {
            for i in 1..=3 {
                out.push(TableEntry::new(format!("W{i}"), cox_gp_text(i)?));
            }
        }
        "ex1A" => {
            for k in 3..=5 {
                out.push(TableEntry::new(
                    format!("A1(k={k})"),
                    format!("nodes 1..6; {TRIANGLE}; 3-4; 4-5:{k}; 5-6:m"),
                ));
            }
            for k in 3..=5 {
                for l in 3..=k {
                    out.push(TableEntry::new(
                        format!("A2(k={k},l={l})"),
                        format!("nodes 1..6; {TRIANGLE}; 3-4; 4-5:{k}; 5-6:m; 4-6:{l}"),
                    ));
                }
            }
            for j in 4..=5 {
                out.push(TableEntry::new(
                    format!("A3(j={j})"),
                    format!("nodes 1..6; {TRIANGLE}; 3-4:{j}; 4-5; 5-6:m"),
                ));
            }
            for j in 4..=5 {
                out.push(TableEntry::new(
                    format!("A4(j={j})"),
                    format!("nodes 1..6; {TRIANGLE}; 3-4:{j}; 4-5; 5-6:m; 4-6"),
                ));
            }
        }
        "ex1B" => {
            let head = "nodes 1,2,3,4,5,6,n1; 1-n1; 2-n1; 2-3; 1-3; 3-4";
            for p in 3..=5 {
                out.push(TableEntry::new(format!("B1(p={p})"), format!("{head}; 4-5:{p}; 5-6:m")));
            }
            for p in 3..=5 {
                for q in 3..=p {
                    out.push(TableEntry::new(
                        format!("B2(p={p},q={q})"),
                        format!("{head}; 4-5:{p}; 5-6:m; 4-6:{q}"),
                    ));
                }
            }
        }
        "ex1C" => {
            let head = "nodes 1,2,3,4,5,6,n1,n2; 1-n1; n1-n2; n2-2; 2-3; 1-3; 3-4; 4-5; 5-6:m";
            out.push(TableEntry::new("C1", head));
            out.push(TableEntry::new("C2", format!("{head}; 4-6")));
        }
        "ex1D" => {
            let head = "nodes 1,2,3,4,5,6,n1,n2,n3; 1-n1; n1-n3; n3-n2; n2-2; 2-3; 1-3; 3-4; 4-5; 5-6:m";
            out.push(TableEntry::new("D1", head));
            out.push(TableEntry::new("D2", format!("{head}; 4-6")));
        }
        "ex2" => {
            for k in 4..=5 {
                out.push(TableEntry::new(
                    format!("E5a(k={k})"),
                    format!("nodes 1,2,3,4,5,6,n1; 3-1; 1-n1:{k}; n1-2; 2-3; {TAIL_TRIANGLE}"),
                ));
            }
            out.push(TableEntry::new(
                "E5b",
                format!("nodes 1,2,3,4,5,6,n1; 3-1; 1-2:5; 2-n1; {TAIL_TRIANGLE}"),
            ));
            out.push(TableEntry::new(
                "E5c",
                format!("nodes 1,2,3,4,5,6,n1; 3-1; 1-2; 1-n1:5; {TAIL_TRIANGLE}"),
            ));
            out.push(TableEntry::new(
                "E6a",
                format!("nodes 1,2,3,4,5,6,n1,n2; 3-1; 1-n1; n1-n2:4; n2-2; 2-3; {TAIL_TRIANGLE}"),
            ));
            out.push(TableEntry::new(
                "E6b",
                format!("nodes 1,2,3,4,5,6,n1,n2; 3-2; 2-n2; n2-n1; n1-1:5; {TAIL_TRIANGLE}"),
            ));
            out.push(TableEntry::new(
                "E7",
                "nodes 1,2,3,4,5,6,7,8,n1; 1-n1; 2-n1; 2-3; 3-1; 3-4; 4-5; 5-6; 6-7; 7-8:5",
            ));
            out.push(TableEntry::new(
                "E8",
                "nodes 1,2,3,4,5,6,7,8,n1,n2; 1-n1; n1-n2; n2-2; 2-3; 3-1; 3-4; 4-5; 5-6; 6-7; 7-8:5",
            ));
        }
        "mix" => {
            out.push(TableEntry::new(
                "M5",
                format!("nodes 1,2,3,4,5,6,n1; 1-n1; 2-n1; 2-3; 3-1; {TAIL_TRIANGLE}"),
            ));
            out.push(TableEntry::new(
                "M6",
                format!("nodes 1,2,3,4,5,6,n1,n2; 1-n1; n1-n2; n2-2; 2-3; 3-1; {TAIL_TRIANGLE}"),
            ));
        }
        "circle" => {
            out.push(TableEntry::new("U", U_DIAGRAM));
            out.push(TableEntry::new("V", V_DIAGRAM));
        }
        other => return Err(Error::UnsupportedFamily(format!("unknown table `{other}`"))),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes() {
        let sizes: Vec<usize> = TABLE_IDS.iter().map(|id| table(id).unwrap().len()).collect();
        assert_eq!(sizes, vec![3, 13, 9, 2, 2, 8, 2, 2]);
        assert!(table("nope").is_err());
    }

    #[test]
    fn entries_parse_and_bind() {
        for id in TABLE_IDS {
            for e in table(id).unwrap() {
                let w = e.at(Order::Finite(7)).unwrap();
                assert!(w.is_irreducible(), "{}", e.name);
                let d = w.rank() - 2;
                assert!((4..=8).contains(&d));
            }
        }
    }

    #[test]
    fn cox_gp_labels() {
        let w2 = cox_gp(2).unwrap().bind_one("m", Order::Finite(9)).unwrap();
        assert_eq!(w2.order_by_name("3", "4").unwrap(), Order::Finite(5));
        assert_eq!(w2.order_by_name("5", "6").unwrap(), Order::Finite(9));
        assert_eq!(w2.order_by_name("4", "6").unwrap(), Order::Finite(2));
        assert!(cox_gp(4).is_err());
    }
}
