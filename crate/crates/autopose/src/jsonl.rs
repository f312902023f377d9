//! Line-delimited JSON readers and writers for annotations, ground truth
//! and predictions. One object per line; key names are part of the contract.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::anno::{Annotation, AnnotationSet, JointId, Origin, Provenance, Status};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::num::Real;
use crate::video::GroundTruth;

#[derive(Debug, Serialize, Deserialize)]
struct AnnotationRecord {
    frame: usize,
    joint: String,
    x: f64,
    y: f64,
    confidence: f64,
    origin: String,
    source_frame: usize,
    hop_count: u32,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    occluded: Option<bool>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub frame: usize,
    pub joint: String,
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: path.display().to_string(),
        line,
        message: msg.into(),
    }
}

fn record_of<S: Real>(a: &Annotation<S>, occluded: Option<bool>) -> AnnotationRecord {
    AnnotationRecord {
        frame: a.frame,
        joint: a.joint.name().to_string(),
        x: a.pos.x.as_f64(),
        y: a.pos.y.as_f64(),
        confidence: a.confidence,
        origin: a.provenance.origin.name().to_string(),
        source_frame: a.provenance.source_frame,
        hop_count: a.provenance.hop_count,
        status: a.status.name().to_string(),
        occluded,
    }
}

fn annotation_of<S: Real>(rec: &AnnotationRecord, path: &Path, line: usize) -> Result<Annotation<S>> {
    let joint = JointId::from_name(&rec.joint)
        .ok_or_else(|| parse_err(path, line, format!("unknown joint name `{}`", rec.joint)))?;
    let origin = Origin::from_name(&rec.origin)
        .ok_or_else(|| parse_err(path, line, format!("unknown origin `{}`", rec.origin)))?;
    let status = Status::from_name(&rec.status)
        .ok_or_else(|| parse_err(path, line, format!("unknown status `{}`", rec.status)))?;
    if !(rec.x.is_finite() && rec.y.is_finite()) {
        return Err(parse_err(path, line, "non-finite position"));
    }
    Ok(Annotation {
        frame: rec.frame,
        joint,
        pos: Point2::new(S::of(rec.x), S::of(rec.y)),
        confidence: rec.confidence,
        provenance: Provenance {
            origin,
            source_frame: rec.source_frame,
            hop_count: rec.hop_count,
        },
        status,
    })
}

pub fn write_annotations<S: Real>(set: &AnnotationSet<S>, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for a in set.sorted_for_output() {
        serde_json::to_writer(&mut out, &record_of(&a, None)).map_err(std::io::Error::other)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_annotations<S: Real>(path: &Path) -> Result<AnnotationSet<S>> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut set = AnnotationSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: AnnotationRecord = serde_json::from_str(&line)
            .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        set.insert(annotation_of(&rec, path, i + 1)?);
    }
    Ok(set)
}

pub fn write_ground_truth<S: Real>(gt: &GroundTruth<S>, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for (&(frame, joint), entry) in gt.iter() {
        let pos = entry.pos.unwrap_or(Point2::new(S::of(-1.0), S::of(-1.0)));
        let rec = AnnotationRecord {
            frame,
            joint: joint.name().to_string(),
            x: pos.x.as_f64(),
            y: pos.y.as_f64(),
            confidence: 1.0,
            origin: Origin::Initial.name().to_string(),
            source_frame: frame,
            hop_count: 0,
            status: Status::Active.name().to_string(),
            occluded: Some(entry.occluded),
        };
        serde_json::to_writer(&mut out, &rec).map_err(std::io::Error::other)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_ground_truth<S: Real>(path: &Path) -> Result<GroundTruth<S>> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut gt = GroundTruth::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: AnnotationRecord = serde_json::from_str(&line)
            .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let joint = JointId::from_name(&rec.joint)
            .ok_or_else(|| parse_err(path, i + 1, format!("unknown joint name `{}`", rec.joint)))?;
        let pos = if rec.x >= 0.0 && rec.y >= 0.0 {
            Some(Point2::new(S::of(rec.x), S::of(rec.y)))
        } else {
            None
        };
        gt.set(rec.frame, joint, pos, rec.occluded.unwrap_or(false));
    }
    Ok(gt)
}

pub fn write_predictions(preds: &[PredictionRecord], path: &Path) -> Result<()> {
    let mut sorted: Vec<&PredictionRecord> = preds.iter().collect();
    sorted.sort_by(|a, b| (a.frame, &a.joint).cmp(&(b.frame, &b.joint)));
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for rec in sorted {
        serde_json::to_writer(&mut out, rec).map_err(std::io::Error::other)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_predictions(path: &Path) -> Result<Vec<(usize, JointId, Point2<f64>, f64)>> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PredictionRecord = serde_json::from_str(&line)
            .map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let joint = JointId::from_name(&rec.joint)
            .ok_or_else(|| parse_err(path, i + 1, format!("unknown joint name `{}`", rec.joint)))?;
        out.push((rec.frame, joint, Point2::new(rec.x, rec.y), rec.confidence));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_set() -> AnnotationSet<f64> {
        let mut set = AnnotationSet::new();
        set.insert(Annotation::initial(3, JointId::LWrist, Point2::new(10.25, 20.5)));
        let mut prop = Annotation::initial(3, JointId::LWrist, Point2::new(11.0, 21.0));
        prop.provenance = Provenance {
            origin: Origin::Temporal,
            source_frame: 2,
            hop_count: 1,
        };
        prop.confidence = 0.98;
        set.insert(prop);
        let mut disc = Annotation::initial(5, JointId::Head, Point2::new(50.0, 8.125));
        disc.status = Status::Discarded;
        set.insert(disc);
        set
    }

    #[test]
    fn annotations_round_trip_field_for_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("annos.jsonl");
        let set = sample_set();
        write_annotations(&set, &path).unwrap();
        let back: AnnotationSet<f64> = read_annotations(&path).unwrap();
        assert_eq!(back.len(), set.len());
        let mut original = set.sorted_for_output();
        let mut reread = back.sorted_for_output();
        original.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        reread.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        assert_eq!(original, reread);
    }

    #[test]
    fn unknown_joint_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("annos.jsonl");
        let good = r#"{"frame":0,"joint":"Head","x":1.0,"y":2.0,"confidence":1.0,"origin":"Initial","source_frame":0,"hop_count":0,"status":"Active"}"#;
        let bad = r#"{"frame":1,"joint":"LeftKnee","x":1.0,"y":2.0,"confidence":1.0,"origin":"Initial","source_frame":1,"hop_count":0,"status":"Active"}"#;
        std::fs::write(&path, format!("{good}\n{bad}\n")).unwrap();
        match read_annotations::<f64>(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("LeftKnee"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ground_truth_round_trip_with_occlusion() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gt.jsonl");
        let mut gt: GroundTruth<f64> = GroundTruth::new();
        gt.set(0, JointId::RWrist, Some(Point2::new(30.0, 40.0)), false);
        gt.set(1, JointId::RWrist, Some(Point2::new(31.0, 41.0)), true);
        write_ground_truth(&gt, &path).unwrap();
        let back: GroundTruth<f64> = read_ground_truth(&path).unwrap();
        assert!(!back.occluded(0, JointId::RWrist));
        assert!(back.occluded(1, JointId::RWrist));
        assert_eq!(back.position(1, JointId::RWrist), Some(Point2::new(31.0, 41.0)));
    }
}
