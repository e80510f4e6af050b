//! CSV and JSON output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::risk::RiskRow;
use crate::scenario::{SweepResult, SCHEMA_VERSION};

pub const SWEEP_CSV_HEADER: [&str; 5] =
    ["p_ini_w", "p_recv_low_w", "p_recv_w", "p_recv_high_w", "max_effect"];

pub const RISK_CSV_HEADER: [&str; 5] = ["scenario", "attack_type", "likelihood", "impact", "risk"];

/// Shortest representation that parses back to the same f64.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

/// CSV text with a header row.
pub fn csv_table<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

pub fn sweep_csv(result: &SweepResult) -> String {
    csv_table(
        &SWEEP_CSV_HEADER,
        result.points.iter().map(|p| {
            let top = p
                .effects
                .triggered
                .last()
                .map(|t| t.id.clone())
                .unwrap_or_else(|| "none".to_string());
            vec![num(p.p_ini_w), num(p.p_recv_low_w), num(p.p_recv_w), num(p.p_recv_high_w), top]
        }),
    )
}

pub fn sweep_json(result: &SweepResult) -> String {
    let mut s = serde_json::to_string_pretty(result).expect("sweep serializes");
    s.push('\n');
    s
}

/// Parse a sweep previously written by [`sweep_json`].
pub fn parse_sweep_json(text: &str) -> Result<SweepResult> {
    let r: SweepResult = serde_json::from_str(text).map_err(|e| Error::config("sweep", e.to_string()))?;
    if r.schema_version != SCHEMA_VERSION {
        return Err(Error::config("schema_version", "unsupported version"));
    }
    Ok(r)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "n/a".to_string())
}

pub fn risk_csv(rows: &[RiskRow]) -> String {
    csv_table(
        &RISK_CSV_HEADER,
        rows.iter().map(|r| {
            vec![
                r.scenario.clone(),
                r.attack_type.as_str().to_string(),
                opt(r.likelihood),
                opt(r.impact),
                r.risk.to_string(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RiskTable {
    pub schema_version: String,
    pub rows: Vec<RiskRow>,
}

pub fn risk_json(rows: &[RiskRow]) -> String {
    let table = RiskTable {
        schema_version: SCHEMA_VERSION.to_string(),
        rows: rows.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&table).expect("risk table serializes");
    s.push('\n');
    s
}

/// Any serializable value as pretty JSON with a schema version tag.
pub fn tagged_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("value serializes");
    if let serde_json::Value::Object(map) = &mut v {
        map.insert(
            "schema_version".into(),
            serde_json::Value::String(SCHEMA_VERSION.into()),
        );
    }
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effects::{classify_effects, default_ladder};
    use crate::model::Receiver;
    use crate::risk::{published_assessments, scenario_risk_table, AttackType};
    use crate::scenario::SweepPoint;

    fn sample() -> SweepResult {
        let rx = Receiver::new(0.2);
        let points = [1.0, 3.3e2]
            .iter()
            .map(|&p| SweepPoint {
                p_ini_w: p,
                p_recv_low_w: p * 1e-12,
                p_recv_w: p * 1e-11 / 3.0,
                p_recv_high_w: p * 1e-10,
                effects: classify_effects(p * 1e-11 / 3.0, &rx, &default_ladder()).unwrap(),
            })
            .collect();
        SweepResult {
            schema_version: SCHEMA_VERSION.into(),
            scenario: "Ground-LEO".into(),
            attack_type: AttackType::OutOfFov,
            wavelength: 810e-9,
            adaptive_optics: false,
            points,
        }
    }

    #[test]
    fn csv_layout() {
        let csv = sweep_csv(&sample());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "p_ini_w,p_recv_low_w,p_recv_w,p_recv_high_w,max_effect");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with(",spd_noise"));
        let back: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(back, 3.3e2 * 1e-11 / 3.0);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = sample();
        let text = sweep_json(&s);
        assert!(text.contains("\"schema_version\": \"1\""));
        assert_eq!(parse_sweep_json(&text).unwrap(), s);
    }

    #[test]
    fn risk_rows() {
        let rows = scenario_risk_table(&published_assessments());
        let csv = risk_csv(&rows);
        assert!(csv.lines().any(|l| l == "Ground-LEO,out_of_fov,Probable,Marginal,Serious"));
        assert!(csv.lines().any(|l| l == "Ground-LEO-Ground,in_fov,n/a,n/a,None"));
        let table: RiskTable = serde_json::from_str(&risk_json(&rows)).unwrap();
        assert_eq!(table.rows, rows);
    }
}
