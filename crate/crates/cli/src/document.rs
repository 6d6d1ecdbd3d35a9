//! On-disk documents: instances (explicit points or a BLP system), solve
//! results, verification reports and slice geometry listings.
//!
//! Field order in every serialized document is the declaration order below.

use conedist::{
    diameter_bound, enumerate_blp, BlpRow, BlpSystem, BoundCertificate, Instance64, Sense,
    SliceGeometry64, Solution64, Status, SupportEntry, VerificationReport,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub n: usize,
    pub target: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blp: Option<BlpDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlpDocument {
    pub n: usize,
    pub rows: Vec<BlpRowDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlpRowDocument {
    pub coeffs: Vec<f64>,
    /// One of `"<="`, `"="`, `">="`.
    pub sense: String,
    pub rhs: f64,
}

fn invalid(msg: String) -> CliError {
    CliError::Invalid(msg)
}

fn check_entries(values: &[f64], n: usize, field: &str) -> Result<()> {
    if values.len() != n {
        return Err(invalid(format!(
            "{field} has {} entries, expected n = {n}",
            values.len()
        )));
    }
    for (j, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(invalid(format!("{field}[{j}] is not finite")));
        }
        if x < 0.0 {
            return Err(invalid(format!("{field}[{j}] is negative ({x})")));
        }
    }
    Ok(())
}

impl InstanceDocument {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    pub fn from_instance(instance: &Instance64) -> Self {
        Self {
            n: instance.dim(),
            target: instance.target().to_vec(),
            points: Some(instance.generators().to_vec()),
            blp: None,
        }
    }

    /// Validates the document and materializes the generator set, enumerating
    /// the BLP system when one is given.
    pub fn to_instance(&self) -> Result<Instance64> {
        if self.n == 0 {
            return Err(invalid("n must be at least 1".into()));
        }
        check_entries(&self.target, self.n, "target")?;
        let generators = match (&self.points, &self.blp) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(invalid(
                    "exactly one of \"points\" or \"blp\" must be present".into(),
                ))
            }
            (Some(points), None) => {
                for (i, y) in points.iter().enumerate() {
                    check_entries(y, self.n, &format!("points[{i}]"))?;
                }
                points.clone()
            }
            (None, Some(blp)) => {
                if blp.n != self.n {
                    return Err(invalid(format!(
                        "blp.n = {} does not match n = {}",
                        blp.n, self.n
                    )));
                }
                let system = blp.to_system()?;
                let points = enumerate_blp(&system)?;
                if points.is_empty() {
                    return Err(invalid("blp system has no feasible binary point".into()));
                }
                points
            }
        };
        Ok(Instance64::new(generators, self.target.clone())?)
    }
}

impl BlpDocument {
    pub fn to_system(&self) -> Result<BlpSystem<f64>> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.n {
                return Err(invalid(format!(
                    "blp.rows[{r}].coeffs has {} entries, expected {}",
                    row.coeffs.len(),
                    self.n
                )));
            }
            let sense: Sense = row
                .sense
                .parse()
                .map_err(|e| invalid(format!("blp.rows[{r}].sense: {e}")))?;
            rows.push(BlpRow {
                coeffs: row.coeffs.clone(),
                sense,
                rhs: row.rhs,
            });
        }
        Ok(BlpSystem::new(self.n, rows)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportDocument {
    pub index: usize,
    pub weight: f64,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    /// `Converged`, `MaxIterations` or `TargetUnreachable`.
    pub status: String,
    pub distance: f64,
    pub distance_sq: f64,
    pub iterations: usize,
    pub final_gap: f64,
    /// Absent when the target is unreachable.
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default)]
    pub diam_sq_bound: Option<f64>,
    pub z_star: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_slice: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<SupportDocument>>,
}

fn parse_status(s: &str) -> Result<Status> {
    [
        Status::Converged,
        Status::MaxIterations,
        Status::TargetUnreachable,
    ]
    .into_iter()
    .find(|st| st.as_str() == s)
    .ok_or_else(|| invalid(format!("unknown status {s:?}")))
}

impl ResultDocument {
    pub fn from_solution(solution: &Solution64) -> Self {
        let support = (!solution.support.is_empty()).then(|| {
            solution
                .support
                .iter()
                .map(|e| SupportDocument {
                    index: e.index,
                    weight: e.weight,
                    coefficient: e.coefficient,
                })
                .collect()
        });
        Self {
            status: solution.status.as_str().to_string(),
            distance: solution.distance,
            distance_sq: solution.distance_sq,
            iterations: solution.iterations,
            final_gap: solution.final_gap,
            rho: solution.certificate.as_ref().map(|c| c.rho),
            diam_sq_bound: solution.certificate.as_ref().map(|c| c.diam_sq_bound),
            z_star: solution.z_star.clone(),
            z_slice: solution.z_slice.clone(),
            support,
        }
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })
    }

    /// Rebuilds the solver answer this document records, for verification.
    pub fn to_solution(&self, instance: &Instance64) -> Result<Solution64> {
        let status = parse_status(&self.status)?;
        let certificate = match (self.rho, self.diam_sq_bound) {
            (Some(rho), Some(diam_sq_bound)) => Some(BoundCertificate {
                rho,
                diam_sq_bound,
                target_norm_sq: instance.target_norm_sq(),
            }),
            _ => diameter_bound(instance).ok(),
        };
        let support = self
            .support
            .iter()
            .flatten()
            .map(|e| {
                if e.index >= instance.len() {
                    return Err(invalid(format!(
                        "support index {} out of range ({} generators)",
                        e.index,
                        instance.len()
                    )));
                }
                Ok(SupportEntry {
                    index: e.index,
                    weight: e.weight,
                    coefficient: e.coefficient,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Solution64 {
            status,
            z_star: self.z_star.clone(),
            z_slice: self.z_slice.clone(),
            distance: self.distance,
            distance_sq: self.distance_sq,
            iterations: self.iterations,
            final_gap: self.final_gap,
            certificate,
            support,
            history: None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckDocument {
    pub name: String,
    /// `null` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationDocument {
    /// `pass` or `fail`.
    pub result: String,
    pub oracle_distance_sq: f64,
    pub checks: Vec<CheckDocument>,
}

impl VerificationDocument {
    pub fn from_report(report: &VerificationReport) -> Self {
        Self {
            result: if report.passed { "pass" } else { "fail" }.to_string(),
            oracle_distance_sq: report.oracle_distance_sq,
            checks: report
                .checks
                .iter()
                .map(|c| CheckDocument {
                    name: c.name.to_string(),
                    residual: c.residual.is_finite().then_some(c.residual),
                    threshold: c.threshold,
                    passed: c.passed,
                })
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.result == "pass"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexDocument {
    pub index: usize,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayDocument {
    pub index: usize,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryDocument {
    pub target_norm_sq: f64,
    pub vertices: Vec<VertexDocument>,
    pub rays: Vec<RayDocument>,
}

impl GeometryDocument {
    pub fn from_geometry(geometry: &SliceGeometry64) -> Self {
        Self {
            target_norm_sq: geometry.target_norm_sq,
            vertices: geometry
                .vertex_indices
                .iter()
                .zip(&geometry.vertices)
                .map(|(&index, p)| VertexDocument {
                    index,
                    point: p.clone(),
                })
                .collect(),
            rays: geometry
                .ray_indices
                .iter()
                .zip(geometry.ray_directions())
                .map(|(&index, direction)| RayDocument { index, direction })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden_doc() -> InstanceDocument {
        InstanceDocument::parse(
            r#"{"n": 3, "target": [1, 1, 0],
                "points": [[1,1,2],[0,2,3],[2,1,3],[3,0,2],[0,0,2]]}"#,
            "test",
        )
        .unwrap()
    }

    #[test]
    fn integer_literals_load_as_floats() {
        let inst = golden_doc().to_instance().unwrap();
        assert_eq!(inst.len(), 5);
        assert_eq!(inst.target(), &[1.0, 1.0, 0.0]);
    }

    #[test]
    fn negative_coordinate_is_named() {
        let mut doc = golden_doc();
        doc.points.as_mut().unwrap()[4][2] = -1.0;
        let msg = doc.to_instance().unwrap_err().to_string();
        assert!(msg.contains("points[4][2]"), "{msg}");
    }

    #[test]
    fn both_or_neither_source_rejected() {
        let mut doc = golden_doc();
        doc.blp = Some(BlpDocument { n: 3, rows: vec![] });
        assert!(doc.to_instance().is_err());
        doc.points = None;
        doc.blp = None;
        assert!(doc.to_instance().is_err());
    }

    #[test]
    fn parse_error_reports_line_and_column() {
        let err = InstanceDocument::parse("{\n  \"n\": 3,\n  \"target\": [1, 1,]\n}", "x.json")
            .unwrap_err()
            .to_string();
        assert!(err.contains("x.json") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let err = InstanceDocument::parse(r#"{"n":1,"target":[1],"pts":[[1]]}"#, "x")
            .unwrap_err()
            .to_string();
        assert!(err.contains("pts"), "{err}");
    }

    #[test]
    fn bad_sense_is_named() {
        let doc = InstanceDocument::parse(
            r#"{"n":2,"target":[1,1],"blp":{"n":2,"rows":[{"coeffs":[1,1],"sense":"<","rhs":1}]}}"#,
            "x",
        )
        .unwrap();
        let msg = doc.to_instance().unwrap_err().to_string();
        assert!(msg.contains("blp.rows[0].sense"), "{msg}");
    }
}
