//! Frames, the frame store, and ground truth.
//!
//! Frames are 8-bit interleaved RGB. All floating-point sampling converts to
//! the generic scalar on the fly, so the store stays compact for long videos.

use std::collections::BTreeMap;
use std::path::Path;

use crate::anno::{AnnotationSet, JointId, Origin};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::num::Real;

/// Target inter-shoulder distance after ingest normalization, in pixels.
pub const SHOULDER_SCALE_PX: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<u8>, // RGB interleaved, row-major
}

impl Frame {
    pub fn new(width: usize, height: usize) -> Self {
        Frame {
            width,
            height,
            data: vec![0; width * height * 3],
        }
    }

    pub fn from_raw(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::invalid(format!(
                "frame buffer length {} does not match {}x{} RGB",
                data.len(),
                width,
                height
            )));
        }
        Ok(Frame { width, height, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn raw(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Clamped integer access (replicates the border).
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> [u8; 3] {
        let xi = x.clamp(0, self.width as isize - 1) as usize;
        let yi = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xi, yi)
    }

    /// Bilinear sample of one channel at a sub-pixel location, border
    /// replicated, result scaled to `[0, 1]`.
    pub fn sample_bilinear<S: Real>(&self, x: S, y: S, channel: usize) -> S {
        let xf = x.floor();
        let yf = y.floor();
        let ax = x - xf;
        let ay = y - yf;
        let x0 = xf.as_f64() as isize;
        let y0 = yf.as_f64() as isize;
        let p = |dx: isize, dy: isize| -> S {
            S::of_usize(self.get_clamped(x0 + dx, y0 + dy)[channel] as usize)
        };
        let one = S::one();
        let top = p(0, 0) * (one - ax) + p(1, 0) * ax;
        let bot = p(0, 1) * (one - ax) + p(1, 1) * ax;
        (top * (one - ay) + bot * ay) / S::of(255.0)
    }

    /// Luma plane in `[0, 1]`, Rec.601 weights.
    pub fn to_gray<S: Real>(&self) -> Vec<S> {
        let mut out = Vec::with_capacity(self.width * self.height);
        for px in self.data.chunks_exact(3) {
            let v = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            out.push(S::of(v / 255.0));
        }
        out
    }

    /// Bilinear resize to the given dimensions.
    pub fn resized(&self, new_w: usize, new_h: usize) -> Frame {
        let mut out = Frame::new(new_w, new_h);
        let sx = self.width as f64 / new_w as f64;
        let sy = self.height as f64 / new_h as f64;
        for y in 0..new_h {
            let src_y = (y as f64 + 0.5) * sy - 0.5;
            for x in 0..new_w {
                let src_x = (x as f64 + 0.5) * sx - 0.5;
                let mut rgb = [0u8; 3];
                for (c, v) in rgb.iter_mut().enumerate() {
                    let s: f64 = self.sample_bilinear(src_x.max(0.0), src_y.max(0.0), c);
                    *v = (s * 255.0).round().clamp(0.0, 255.0) as u8;
                }
                out.set(x, y, rgb);
            }
        }
        out
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let img = image::RgbImage::from_raw(self.width as u32, self.height as u32, self.data.clone())
            .expect("buffer length matches dimensions");
        img.save(path)
            .map_err(|e| Error::Io(std::io::Error::other(format!("{}: {e}", path.display()))))
    }

    pub fn load_png(path: &Path) -> Result<Frame> {
        let img = image::open(path)
            .map_err(|e| Error::Io(std::io::Error::other(format!("{}: {e}", path.display()))))?
            .into_rgb8();
        Frame::from_raw(img.width() as usize, img.height() as usize, img.into_raw())
    }
}

/// The ordered frame sequence at normalized person scale.
#[derive(Debug, Clone)]
pub struct FrameStore {
    frames: Vec<Frame>,
    width: usize,
    height: usize,
    scale_factor: f64,
}

impl FrameStore {
    pub fn new(frames: Vec<Frame>) -> Result<FrameStore> {
        let first = frames
            .first()
            .ok_or_else(|| Error::invalid("frame store needs at least one frame"))?;
        let (width, height) = (first.width, first.height);
        if frames.iter().any(|f| f.width != width || f.height != height) {
            return Err(Error::invalid("all frames must share identical dimensions"));
        }
        Ok(FrameStore {
            frames,
            width,
            height,
            scale_factor: 1.0,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    pub fn frame(&self, index: usize) -> &Frame {
        &self.frames[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Frame> {
        self.frames.iter()
    }

    /// Load every `.png` in a directory, sorted by file name.
    pub fn ingest_dir(dir: &Path) -> Result<FrameStore> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "png"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::invalid(format!("no .png frames in {}", dir.display())));
        }
        let frames = paths
            .iter()
            .map(|p| Frame::load_png(p))
            .collect::<Result<Vec<_>>>()?;
        FrameStore::new(frames)
    }

    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (i, f) in self.frames.iter().enumerate() {
            f.save_png(&dir.join(format!("frame_{i:06}.png")))?;
        }
        Ok(())
    }

    /// Median inter-shoulder distance over frames where both shoulders carry
    /// an Active Initial annotation. `None` when no such frame exists.
    pub fn median_shoulder_distance<S: Real>(annos: &AnnotationSet<S>) -> Option<f64> {
        let mut dists: Vec<f64> = Vec::new();
        for (_, a) in annos.iter_active() {
            if a.joint != JointId::LShoulder || a.provenance.origin != Origin::Initial {
                continue;
            }
            for &rid in annos.at(a.frame, JointId::RShoulder) {
                let r = annos.get(rid);
                if r.is_active() && r.provenance.origin == Origin::Initial {
                    dists.push(a.pos.distance(r.pos).as_f64());
                }
            }
        }
        if dists.is_empty() {
            return None;
        }
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(dists[dists.len() / 2])
    }

    /// Rescale frames and annotations so the median shoulder distance of the
    /// initial annotations lands on [`SHOULDER_SCALE_PX`]. When no shoulder
    /// pair is annotated, `fallback_scale` is applied instead. Scales within
    /// 1e-6 of unity skip the resample.
    pub fn normalized<S: Real>(
        mut self,
        annos: &mut AnnotationSet<S>,
        fallback_scale: f64,
    ) -> Result<FrameStore> {
        let scale = match Self::median_shoulder_distance(annos) {
            Some(d) if d > 0.0 => SHOULDER_SCALE_PX / d,
            _ => fallback_scale,
        };
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid(format!("bad normalization scale {scale}")));
        }
        if (scale - 1.0).abs() < 1e-6 {
            return Ok(self);
        }
        let new_w = ((self.width as f64 * scale).round() as usize).max(1);
        let new_h = ((self.height as f64 * scale).round() as usize).max(1);
        let sx = new_w as f64 / self.width as f64;
        let sy = new_h as f64 / self.height as f64;
        self.frames = self.frames.iter().map(|f| f.resized(new_w, new_h)).collect();
        self.width = new_w;
        self.height = new_h;
        self.scale_factor = scale;
        let mut rescaled = AnnotationSet::new();
        for (_, a) in annos.iter() {
            let mut b = *a;
            b.pos = Point2::new(b.pos.x * S::of(sx), b.pos.y * S::of(sy))
                .clamp_to(new_w, new_h);
            rescaled.insert(b);
        }
        *annos = rescaled;
        Ok(self)
    }
}

/// Reference joint positions with occlusion flags. Occluded joints may still
/// carry a position so occlusion detectors can be scored against them.
#[derive(Debug, Clone, Default)]
pub struct GroundTruth<S> {
    entries: BTreeMap<(usize, JointId), GtEntry<S>>,
}

#[derive(Debug, Clone, Copy)]
pub struct GtEntry<S> {
    pub pos: Option<Point2<S>>,
    pub occluded: bool,
}

impl<S: Real> GroundTruth<S> {
    pub fn new() -> Self {
        GroundTruth {
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, frame: usize, joint: JointId, pos: Option<Point2<S>>, occluded: bool) {
        self.entries.insert((frame, joint), GtEntry { pos, occluded });
    }

    pub fn get(&self, frame: usize, joint: JointId) -> Option<&GtEntry<S>> {
        self.entries.get(&(frame, joint))
    }

    pub fn occluded(&self, frame: usize, joint: JointId) -> bool {
        self.get(frame, joint).is_some_and(|e| e.occluded)
    }

    pub fn position(&self, frame: usize, joint: JointId) -> Option<Point2<S>> {
        self.get(frame, joint).and_then(|e| e.pos)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, JointId), &GtEntry<S>)> {
        self.entries.iter()
    }

    pub fn frames(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.entries.keys().map(|(f, _)| *f).collect();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anno::Annotation;

    #[test]
    fn bilinear_matches_hand_computation() {
        let mut f = Frame::new(4, 4);
        // Horizontal ramp: column x has value 10 * x.
        for y in 0..4 {
            for x in 0..4 {
                f.set(x, y, [(10 * x) as u8; 3]);
            }
        }
        let v: f64 = f.sample_bilinear(1.5, 2.0, 0);
        assert!((v - 15.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn frame_store_rejects_mixed_dimensions() {
        let err = FrameStore::new(vec![Frame::new(4, 4), Frame::new(5, 4)]);
        assert!(err.is_err());
    }

    #[test]
    fn normalization_targets_shoulder_scale() {
        let frames = vec![Frame::new(200, 100); 2];
        let mut annos: AnnotationSet<f64> = AnnotationSet::new();
        let mut l = Annotation::initial(0, JointId::LShoulder, Point2::new(50.0, 50.0));
        let r = Annotation::initial(0, JointId::RShoulder, Point2::new(100.0, 50.0));
        annos.insert(l);
        annos.insert(r);
        l.frame = 1;
        l.provenance.source_frame = 1;
        annos.insert(l);
        let store = FrameStore::new(frames).unwrap().normalized(&mut annos, 1.0).unwrap();
        // Median shoulder distance 50 px -> scale 2.
        assert_eq!(store.width(), 400);
        assert_eq!(store.height(), 200);
        let lpos = annos.get(0).pos;
        let rpos = annos.get(1).pos;
        assert!((lpos.distance(rpos) - 100.0).abs() < 1e-9);
    }
}
