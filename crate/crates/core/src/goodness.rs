use std::collections::BTreeMap;

use serde::Serialize;

use crate::drawing::{Drawing, Edge, NodeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Index of the violated goodness condition, 1 to 5.
    pub condition: u8,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Checks the goodness conditions that the planarized structure can still
/// violate: two edges crossing more than once (4) and adjacent edges
/// crossing (5). Conditions (1) to (3) are enforced when a drawing is loaded.
pub fn validate_goodness(d: &Drawing) -> ValidationReport {
    let mut pair_count: BTreeMap<(Edge, Edge), usize> = BTreeMap::new();
    for kind in d.nodes() {
        if let NodeKind::Crossing(e, f) = *kind {
            *pair_count.entry((e, f)).or_default() += 1;
        }
    }
    let mut violations = Vec::new();
    for (&(e, f), &count) in &pair_count {
        if count > 1 {
            violations.push(Violation {
                condition: 4,
                edges: vec![e, f],
            });
        }
        if e.is_adjacent_to(f) {
            violations.push(Violation {
                condition: 5,
                edges: vec![e, f],
            });
        }
    }
    ValidationReport {
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::load_drawing;

    fn geometric(vertices: &[(i64, i64)], edges: &[(usize, usize, &[(i64, i64)])]) -> String {
        let vs: Vec<String> = vertices
            .iter()
            .enumerate()
            .map(|(i, (x, y))| format!(r#"{{"id":{i},"x":{x},"y":{y}}}"#))
            .collect();
        let es: Vec<String> = edges
            .iter()
            .map(|(u, v, line)| {
                let pts: Vec<String> = line.iter().map(|(x, y)| format!("[{x},{y}]")).collect();
                format!(r#"{{"u":{u},"v":{v},"polyline":[{}]}}"#, pts.join(","))
            })
            .collect();
        format!(
            r#"{{"format":"shellcert-drawing","version":1,"mode":"geometric","n":{},"vertices":[{}],"edges":[{}]}}"#,
            vertices.len(),
            vs.join(","),
            es.join(",")
        )
    }

    #[test]
    fn convex_k4_is_good() {
        let doc = geometric(
            &[(0, 0), (4, 0), (4, 4), (0, 4)],
            &[
                (0, 1, &[(0, 0), (4, 0)]),
                (0, 2, &[(0, 0), (4, 4)]),
                (0, 3, &[(0, 0), (0, 4)]),
                (1, 2, &[(4, 0), (4, 4)]),
                (1, 3, &[(4, 0), (0, 4)]),
                (2, 3, &[(4, 4), (0, 4)]),
            ],
        );
        let report = validate_goodness(&load_drawing(&doc).unwrap());
        assert!(report.pass);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn double_crossing_violates_condition_4() {
        let doc = geometric(
            &[(0, 0), (10, 0), (3, 5), (7, 5)],
            &[
                (0, 1, &[(0, 0), (10, 0)]),
                (2, 3, &[(3, 5), (3, -3), (7, -3), (7, 5)]),
                (0, 2, &[(0, 0), (3, 5)]),
                (0, 3, &[(0, 0), (0, 8), (7, 8), (7, 5)]),
                (1, 2, &[(10, 0), (10, 10), (3, 10), (3, 5)]),
                (1, 3, &[(10, 0), (7, 5)]),
            ],
        );
        let d = load_drawing(&doc).unwrap();
        let report = validate_goodness(&d);
        assert!(!report.pass);
        assert!(report.violations.contains(&Violation {
            condition: 4,
            edges: vec![Edge::new(0, 1), Edge::new(2, 3)],
        }));
    }

    #[test]
    fn adjacent_crossing_violates_condition_5() {
        // Edge 0-2 dips below 0-1 and crosses it on the way up.
        let doc = geometric(
            &[(0, 0), (10, 0), (5, 10), (5, -10)],
            &[
                (0, 1, &[(0, 0), (10, 0)]),
                (0, 2, &[(0, 0), (5, -3), (5, 10)]),
                (0, 3, &[(0, 0), (5, -10)]),
                (1, 2, &[(10, 0), (5, 10)]),
                (1, 3, &[(10, 0), (5, -10)]),
                (2, 3, &[(5, 10), (-5, 0), (5, -10)]),
            ],
        );
        let d = load_drawing(&doc).unwrap();
        let report = validate_goodness(&d);
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == 5 && v.edges == vec![Edge::new(0, 1), Edge::new(0, 2)]));
    }
}
