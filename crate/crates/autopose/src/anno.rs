//! Joint identifiers, annotations with provenance, and the indexed
//! annotation store every stage reads from and writes to.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::geom::Point2;
use crate::num::Real;

/// The seven upper-body joints tracked by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JointId {
    Head,
    LShoulder,
    RShoulder,
    LElbow,
    RElbow,
    LWrist,
    RWrist,
}

pub const ALL_JOINTS: [JointId; 7] = [
    JointId::Head,
    JointId::LShoulder,
    JointId::RShoulder,
    JointId::LElbow,
    JointId::RElbow,
    JointId::LWrist,
    JointId::RWrist,
];

impl JointId {
    pub fn index(self) -> usize {
        self as usize
    }

    /// The mirror-image joint (left/right swap); `Head` maps to itself.
    pub fn swapped(self) -> JointId {
        use JointId::*;
        match self {
            Head => Head,
            LShoulder => RShoulder,
            RShoulder => LShoulder,
            LElbow => RElbow,
            RElbow => LElbow,
            LWrist => RWrist,
            RWrist => LWrist,
        }
    }

    pub fn name(self) -> &'static str {
        use JointId::*;
        match self {
            Head => "Head",
            LShoulder => "LShoulder",
            RShoulder => "RShoulder",
            LElbow => "LElbow",
            RElbow => "RElbow",
            LWrist => "LWrist",
            RWrist => "RWrist",
        }
    }

    pub fn from_name(name: &str) -> Option<JointId> {
        ALL_JOINTS.iter().copied().find(|j| j.name() == name)
    }
}

/// Which pipeline stage created an annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Origin {
    Initial,
    Spatial,
    Temporal,
    Corrected,
    Consensus,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Initial => "Initial",
            Origin::Spatial => "Spatial",
            Origin::Temporal => "Temporal",
            Origin::Corrected => "Corrected",
            Origin::Consensus => "Consensus",
        }
    }

    pub fn from_name(name: &str) -> Option<Origin> {
        [
            Origin::Initial,
            Origin::Spatial,
            Origin::Temporal,
            Origin::Corrected,
            Origin::Consensus,
        ]
        .into_iter()
        .find(|o| o.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Status {
    Active,
    Discarded,
    Occluded,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Active => "Active",
            Status::Discarded => "Discarded",
            Status::Occluded => "Occluded",
        }
    }

    pub fn from_name(name: &str) -> Option<Status> {
        [Status::Active, Status::Discarded, Status::Occluded]
            .into_iter()
            .find(|s| s.name() == name)
    }
}

/// Where an annotation ultimately came from. `source_frame` is the frame of
/// the initial annotation this one descends from; `hop_count` counts
/// derivation steps since then (0 exactly for `Initial`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub origin: Origin,
    pub source_frame: usize,
    pub hop_count: u32,
}

impl Provenance {
    pub fn initial(frame: usize) -> Self {
        Provenance {
            origin: Origin::Initial,
            source_frame: frame,
            hop_count: 0,
        }
    }

    /// One derivation step on top of an existing provenance.
    pub fn derived(self, origin: Origin) -> Self {
        Provenance {
            origin,
            source_frame: self.source_frame,
            hop_count: self.hop_count + 1,
        }
    }

    pub fn is_consistent(&self) -> bool {
        (self.hop_count == 0) == (self.origin == Origin::Initial)
    }
}

/// One joint location in one frame, with lifecycle status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annotation<S> {
    pub frame: usize,
    pub joint: JointId,
    pub pos: Point2<S>,
    pub confidence: f64,
    pub provenance: Provenance,
    pub status: Status,
}

impl<S: Real> Annotation<S> {
    pub fn initial(frame: usize, joint: JointId, pos: Point2<S>) -> Self {
        Annotation {
            frame,
            joint,
            pos,
            confidence: 1.0,
            provenance: Provenance::initial(frame),
            status: Status::Active,
        }
    }

    pub fn is_active(&self) -> bool {
        self.status == Status::Active
    }
}

/// Stable handle into an [`AnnotationSet`]; also the insertion order.
pub type AnnotationId = usize;

/// Collection of annotations indexed by `(frame, joint)`. Multiple `Active`
/// entries per key are expected before consensus. Iteration order is the
/// insertion order, so identical insert sequences give identical views.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct AnnotationSet<S> {
    entries: Vec<Annotation<S>>,
    #[serde(skip)]
    index: BTreeMap<(usize, JointId), Vec<AnnotationId>>,
}

impl<S: Real> AnnotationSet<S> {
    pub fn new() -> Self {
        AnnotationSet {
            entries: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, anno: Annotation<S>) -> AnnotationId {
        debug_assert!(anno.provenance.is_consistent(), "provenance hop/origin mismatch");
        let id = self.entries.len();
        self.index
            .entry((anno.frame, anno.joint))
            .or_default()
            .push(id);
        self.entries.push(anno);
        id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: AnnotationId) -> &Annotation<S> {
        &self.entries[id]
    }

    /// Status transitions are monotone: `Active` may become `Discarded` or
    /// `Occluded`; anything else is a logic error.
    pub fn set_status(&mut self, id: AnnotationId, status: Status) {
        let entry = &mut self.entries[id];
        assert!(
            entry.status == Status::Active || entry.status == status,
            "annotation lifecycle is monotone: {:?} -> {:?}",
            entry.status,
            status
        );
        entry.status = status;
    }

    pub fn iter(&self) -> impl Iterator<Item = (AnnotationId, &Annotation<S>)> {
        self.entries.iter().enumerate()
    }

    pub fn iter_active(&self) -> impl Iterator<Item = (AnnotationId, &Annotation<S>)> {
        self.iter().filter(|(_, a)| a.is_active())
    }

    /// Ids at a `(frame, joint)` key, in insertion order.
    pub fn at(&self, frame: usize, joint: JointId) -> &[AnnotationId] {
        self.index
            .get(&(frame, joint))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn active_at(&self, frame: usize, joint: JointId) -> Vec<AnnotationId> {
        self.at(frame, joint)
            .iter()
            .copied()
            .filter(|&id| self.entries[id].is_active())
            .collect()
    }

    pub fn has_active_with_origin(&self, frame: usize, joint: JointId, origin: Origin) -> bool {
        self.at(frame, joint)
            .iter()
            .any(|&id| self.entries[id].is_active() && self.entries[id].provenance.origin == origin)
    }

    /// Fraction of `n_frames` that hold at least one Active annotation for
    /// `joint`. Duplicate annotations in one frame count once.
    pub fn coverage(&self, joint: JointId, n_frames: usize) -> f64 {
        assert!(n_frames >= 1, "coverage over an empty video is undefined");
        let covered = self
            .index
            .iter()
            .filter(|((f, j), ids)| {
                *j == joint && *f < n_frames && ids.iter().any(|&id| self.entries[id].is_active())
            })
            .count();
        covered as f64 / n_frames as f64
    }

    /// Number of distinct `source_frame` values among Active annotations at
    /// `(frame, joint)` — the corroboration count used by consensus.
    pub fn consensus_cardinality(&self, frame: usize, joint: JointId) -> usize {
        self.at(frame, joint)
            .iter()
            .filter(|&&id| self.entries[id].is_active())
            .map(|&id| self.entries[id].provenance.source_frame)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Rebuild the `(frame, joint)` index after deserialization.
    pub fn reindex(&mut self) {
        self.index.clear();
        for (id, a) in self.entries.iter().enumerate() {
            self.index.entry((a.frame, a.joint)).or_default().push(id);
        }
    }

    /// Merge annotations from `other`, preserving `other`'s order.
    pub fn extend_from(&mut self, other: &AnnotationSet<S>) {
        for (_, a) in other.iter() {
            self.insert(*a);
        }
    }

    /// Keys `(frame, joint)` that currently hold at least one Active entry.
    pub fn active_keys(&self) -> Vec<(usize, JointId)> {
        self.index
            .iter()
            .filter(|(_, ids)| ids.iter().any(|&id| self.entries[id].is_active()))
            .map(|(k, _)| *k)
            .collect()
    }

    /// Canonical ordering for output files: by frame, joint, origin,
    /// source frame, hop count, then position bits. Stable across thread
    /// counts because it depends only on content.
    pub fn sorted_for_output(&self) -> Vec<Annotation<S>> {
        let mut out: Vec<Annotation<S>> = self.entries.clone();
        out.sort_by(|a, b| {
            (a.frame, a.joint, a.provenance.origin, a.provenance.source_frame, a.provenance.hop_count)
                .cmp(&(b.frame, b.joint, b.provenance.origin, b.provenance.source_frame, b.provenance.hop_count))
                .then_with(|| a.pos.x.partial_cmp(&b.pos.x).unwrap_or(std::cmp::Ordering::Equal))
                .then_with(|| a.pos.y.partial_cmp(&b.pos.y).unwrap_or(std::cmp::Ordering::Equal))
                .then_with(|| a.status.cmp(&b.status))
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anno(frame: usize, joint: JointId, source: usize) -> Annotation<f64> {
        Annotation {
            frame,
            joint,
            pos: Point2::new(10.0, 10.0),
            confidence: 1.0,
            provenance: if source == frame {
                Provenance::initial(frame)
            } else {
                Provenance {
                    origin: Origin::Temporal,
                    source_frame: source,
                    hop_count: 1,
                }
            },
            status: Status::Active,
        }
    }

    #[test]
    fn joints_are_swap_paired() {
        assert_eq!(ALL_JOINTS.len(), 7);
        for j in ALL_JOINTS {
            assert_eq!(j.swapped().swapped(), j);
        }
        assert_eq!(JointId::LWrist.swapped(), JointId::RWrist);
        assert_eq!(JointId::Head.swapped(), JointId::Head);
    }

    #[test]
    fn coverage_empty_set_is_zero() {
        let set: AnnotationSet<f64> = AnnotationSet::new();
        assert_eq!(set.coverage(JointId::LWrist, 100), 0.0);
    }

    #[test]
    fn coverage_full() {
        let mut set = AnnotationSet::new();
        for f in 0..100 {
            set.insert(anno(f, JointId::LWrist, f));
        }
        assert_eq!(set.coverage(JointId::LWrist, 100), 1.0);
    }

    #[test]
    fn coverage_counts_distinct_frames() {
        // Frames {0, 1, 1, 5} of 10 -> 3 distinct covered frames.
        let mut set = AnnotationSet::new();
        for f in [0usize, 1, 1, 5] {
            set.insert(anno(f, JointId::LWrist, f));
        }
        assert_eq!(set.coverage(JointId::LWrist, 10), 0.3);
    }

    #[test]
    fn coverage_monotone_under_insert_and_discard() {
        let mut set = AnnotationSet::new();
        let before = set.coverage(JointId::Head, 10);
        let id = set.insert(anno(3, JointId::Head, 3));
        let mid = set.coverage(JointId::Head, 10);
        assert!(mid >= before);
        set.set_status(id, Status::Discarded);
        assert!(set.coverage(JointId::Head, 10) <= mid);
    }

    #[test]
    fn cardinality_collapses_duplicate_sources() {
        let mut set = AnnotationSet::new();
        set.insert(anno(7, JointId::RElbow, 10));
        set.insert(anno(7, JointId::RElbow, 10));
        set.insert(anno(7, JointId::RElbow, 40));
        assert_eq!(set.consensus_cardinality(7, JointId::RElbow), 2);
        assert_eq!(set.consensus_cardinality(8, JointId::RElbow), 0);
    }

    #[test]
    fn cardinality_counts_all_distinct() {
        let mut set = AnnotationSet::new();
        for s in 1..=5 {
            set.insert(anno(20, JointId::Head, s));
        }
        assert_eq!(set.consensus_cardinality(20, JointId::Head), 5);
    }

    #[test]
    #[should_panic(expected = "monotone")]
    fn no_resurrection() {
        let mut set = AnnotationSet::new();
        let id = set.insert(anno(0, JointId::Head, 0));
        set.set_status(id, Status::Discarded);
        set.set_status(id, Status::Active);
    }
}
