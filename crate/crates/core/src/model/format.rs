//! Instance files.
//!
//! Line-oriented form (keywords, whitespace separated values, `#` comments):
//!
//! ```text
//! NAME tiny
//! N_CUSTOMERS 2
//! CAPACITY 10
//! FLEET_SIZE 1
//! COST_MATRIX
//! 4
//! 5 3
//! N_SCENARIOS 2
//! PROB 1/2 1/2
//! DEMANDS
//! 4 6
//! 5 5
//! ```
//!
//! `COST_MATRIX` lists the strict lower triangle over `V = {0..n}`: row `i`
//! (`i = 1..n`) holds `c(i,0) … c(i,i-1)`. `COORDS` may replace it with
//! `n+1` integer points (depot first); costs are rounded Euclidean distances.
//! The structured form is a JSON object with the same keys in lower case.

use serde::{Deserialize, Serialize};

use super::instance::{Instance, ModelError};
use crate::rational::{fmt_rat, parse_rat, Rat};

#[derive(Debug, Default, Serialize, Deserialize)]
struct InstanceDoc {
    #[serde(default)]
    name: Option<String>,
    n_customers: usize,
    capacity: i64,
    #[serde(default)]
    fleet_size: Option<usize>,
    #[serde(default)]
    cost_matrix: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    coords: Option<Vec<[i64; 2]>>,
    n_scenarios: usize,
    prob: Vec<String>,
    demands: Vec<Vec<i64>>,
}

fn schema(msg: impl Into<String>) -> ModelError {
    ModelError::Schema(msg.into())
}

pub fn rounded_euclidean(coords: &[[i64; 2]]) -> Vec<Vec<i64>> {
    coords
        .iter()
        .map(|a| {
            coords
                .iter()
                .map(|b| {
                    let (dx, dy) = ((a[0] - b[0]) as f64, (a[1] - b[1]) as f64);
                    (dx * dx + dy * dy).sqrt().round() as i64
                })
                .collect()
        })
        .collect()
}

impl InstanceDoc {
    fn into_instance(self) -> Result<Instance, ModelError> {
        let n = self.n_customers;
        if n == 0 {
            return Err(schema("N_CUSTOMERS must be positive"));
        }
        let cost = match (self.cost_matrix, self.coords) {
            (Some(m), None) => full_matrix(n, m)?,
            (None, Some(c)) => {
                if c.len() != n + 1 {
                    return Err(schema(format!("COORDS needs {} points, found {}", n + 1, c.len())));
                }
                rounded_euclidean(&c)
            }
            (Some(_), Some(_)) => return Err(schema("give either COST_MATRIX or COORDS, not both")),
            (None, None) => return Err(schema("missing COST_MATRIX or COORDS")),
        };
        if self.prob.len() != self.n_scenarios || self.demands.len() != self.n_scenarios {
            return Err(schema(format!(
                "N_SCENARIOS is {} but found {} probabilities and {} demand rows",
                self.n_scenarios,
                self.prob.len(),
                self.demands.len()
            )));
        }
        let probs = self
            .prob
            .iter()
            .map(|p| parse_rat(p).ok_or_else(|| schema(format!("bad probability {p:?}"))))
            .collect::<Result<Vec<Rat>, _>>()?;
        Instance::new(
            self.name.unwrap_or_else(|| "unnamed".into()),
            cost,
            self.capacity,
            self.fleet_size,
            self.demands,
            probs,
        )
    }
}

/// Accepts either a lower triangle (row `i` of length `i`, `i = 1..n`,
/// optionally with a leading empty/zero depot row and diagonal) or a full matrix.
fn full_matrix(n: usize, rows: Vec<Vec<i64>>) -> Result<Vec<Vec<i64>>, ModelError> {
    let mut full = vec![vec![0i64; n + 1]; n + 1];
    if rows.len() == n + 1 && rows.iter().all(|r| r.len() == n + 1) {
        return Ok(rows);
    }
    let rows: Vec<Vec<i64>> = rows.into_iter().filter(|r| !(r.is_empty() || r == &[0])).collect();
    if rows.len() != n {
        return Err(schema(format!("COST_MATRIX needs {n} lower-triangle rows, found {}", rows.len())));
    }
    for (k, row) in rows.iter().enumerate() {
        let i = k + 1;
        let row = match row.len() {
            l if l == i => &row[..],
            l if l == i + 1 && row[i] == 0 => &row[..i],
            l => return Err(schema(format!("COST_MATRIX row {i} has {l} entries, expected {i}"))),
        };
        for (j, &c) in row.iter().enumerate() {
            full[i][j] = c;
            full[j][i] = c;
        }
    }
    Ok(full)
}

pub fn parse_instance(text: &str) -> Result<Instance, ModelError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: InstanceDoc =
            serde_json::from_str(trimmed).map_err(|e| schema(format!("json: {e}")))?;
        return doc.into_instance();
    }
    parse_lines(text)?.into_instance()
}

fn parse_lines(text: &str) -> Result<InstanceDoc, ModelError> {
    let lines: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect();
    let mut doc = InstanceDoc::default();
    let (mut seen_n, mut seen_cap, mut seen_scen) = (false, false, false);
    let mut i = 0;
    let int = |tok: &str, key: &str| -> Result<i64, ModelError> {
        tok.parse::<i64>().map_err(|_| schema(format!("{key}: expected integer, got {tok:?}")))
    };
    let single = |line: &[&str], key: &str| -> Result<i64, ModelError> {
        match line {
            [_, v] => int(v, key),
            _ => Err(schema(format!("{key} expects one value"))),
        }
    };
    while i < lines.len() {
        let line = &lines[i];
        let key = line[0].trim_end_matches(':').to_ascii_uppercase();
        i += 1;
        match key.as_str() {
            "NAME" => doc.name = Some(line[1..].join(" ")),
            "N_CUSTOMERS" => {
                doc.n_customers = usize::try_from(single(line, &key)?).map_err(|_| schema("N_CUSTOMERS < 0"))?;
                seen_n = true;
            }
            "CAPACITY" => {
                doc.capacity = single(line, &key)?;
                seen_cap = true;
            }
            "FLEET_SIZE" => {
                doc.fleet_size =
                    Some(usize::try_from(single(line, &key)?).map_err(|_| schema("FLEET_SIZE < 0"))?)
            }
            "N_SCENARIOS" => {
                doc.n_scenarios = usize::try_from(single(line, &key)?).map_err(|_| schema("N_SCENARIOS < 0"))?;
                seen_scen = true;
            }
            "PROB" => {
                let mut toks: Vec<String> = line[1..].iter().map(|s| s.to_string()).collect();
                while toks.len() < doc.n_scenarios && i < lines.len() && !is_keyword(lines[i][0]) {
                    toks.extend(lines[i].iter().map(|s| s.to_string()));
                    i += 1;
                }
                doc.prob = toks;
            }
            "COST_MATRIX" | "DEMANDS" | "COORDS" => {
                let mut rows = Vec::new();
                while i < lines.len() && !is_keyword(lines[i][0]) {
                    rows.push(lines[i].iter().map(|t| int(t, &key)).collect::<Result<Vec<_>, _>>()?);
                    i += 1;
                }
                match key.as_str() {
                    "COST_MATRIX" => doc.cost_matrix = Some(rows),
                    "DEMANDS" => doc.demands = rows,
                    _ => {
                        doc.coords = Some(
                            rows.into_iter()
                                .map(|r| match r[..] {
                                    [x, y] => Ok([x, y]),
                                    _ => Err(schema("COORDS rows need two integers")),
                                })
                                .collect::<Result<_, _>>()?,
                        )
                    }
                }
            }
            "END" | "EOF" => break,
            other => return Err(schema(format!("unknown keyword {other:?}"))),
        }
    }
    for (ok, key) in [(seen_n, "N_CUSTOMERS"), (seen_cap, "CAPACITY"), (seen_scen, "N_SCENARIOS")] {
        if !ok {
            return Err(schema(format!("missing {key}")));
        }
    }
    Ok(doc)
}

fn is_keyword(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
}

/// Line-oriented text of an instance (cost matrix as a lower triangle).
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let n = inst.n_customers();
    out.push_str(&format!("NAME {}\nN_CUSTOMERS {n}\nCAPACITY {}\n", inst.name(), inst.capacity()));
    if let Some(k) = inst.fleet_size() {
        out.push_str(&format!("FLEET_SIZE {k}\n"));
    }
    out.push_str("COST_MATRIX\n");
    for i in 1..=n {
        let row: Vec<String> = (0..i).map(|j| inst.cost(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("N_SCENARIOS {}\nPROB", inst.n_scenarios()));
    for p in inst.probabilities() {
        out.push(' ');
        out.push_str(&fmt_rat(p));
    }
    out.push_str("\nDEMANDS\n");
    for row in inst.demand_rows() {
        let row: Vec<String> = row.iter().map(|d| d.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.push_str("END\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num::One;

    const TINY: &str = "NAME tiny\nN_CUSTOMERS 1\nCAPACITY 10\nN_SCENARIOS 1\nCOST_MATRIX\n3\nPROB 1\nDEMANDS\n5\n";

    #[test]
    fn smallest_instance_parses() {
        let inst = parse_instance(TINY).unwrap();
        assert_eq!(inst.n_customers(), 1);
        assert_eq!(inst.cost(0, 1), 3);
        assert_eq!(inst.demand(0, 1), 5);
        assert!(inst.probability(0).is_one());
        assert_eq!(inst.fleet_size(), None);
        assert_eq!(inst.require_fleet_size(), Err(ModelError::MissingFleetSize));
    }

    #[test]
    fn thirds_and_json_form() {
        let json = r#"{"name":"j","n_customers":2,"capacity":10,"fleet_size":1,
            "coords":[[0,0],[3,4],[6,8]],"n_scenarios":3,
            "prob":["1/3","1/3","1/3"],"demands":[[1,2],[3,4],[25,0]]}"#;
        let inst = parse_instance(json).unwrap();
        assert_eq!(inst.cost(0, 2), 10);
        assert_eq!(inst.cost(1, 2), 5);
        assert_eq!(inst.probability(2), &ratio(1, 3));
        assert!(inst.needs_preprocessing());
    }

    #[test]
    fn write_then_parse_round_trips() {
        let text = "NAME r\nN_CUSTOMERS 3\nCAPACITY 7\nFLEET_SIZE 2\nCOORDS\n0 0\n1 5\n4 4\n-3 2\n\
                    N_SCENARIOS 2\nPROB 1/4 3/4\nDEMANDS\n1 2 3\n4 5 6\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn schema_errors() {
        assert!(parse_instance("N_CUSTOMERS 1\nCAPACITY 10\n").is_err());
        let neg = TINY.replace("DEMANDS\n5", "DEMANDS\n-5");
        assert!(matches!(parse_instance(&neg), Err(ModelError::Negative { .. })));
        let half = TINY.replace("PROB 1", "PROB 1/2");
        assert!(matches!(parse_instance(&half), Err(ModelError::ProbabilitySum(_))));
    }
}
