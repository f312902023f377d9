//! Deterministic synthetic articulated-figure videos with exact ground
//! truth, plus the simulated sparse initializer that stands in for a
//! generic pose estimator.

mod render;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::anno::{Annotation, AnnotationSet, JointId, ALL_JOINTS};
use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::num::Real;
use crate::rng::derive_rng;
use crate::video::{FrameStore, GroundTruth};

pub use render::render_frame;

/// A sinusoidal angle channel, degrees: `base + amp * sin(2*pi*t/period + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub base_deg: f64,
    pub amp_deg: f64,
    pub period: f64,
    pub phase_deg: f64,
}

impl Oscillator {
    pub fn constant(base_deg: f64) -> Self {
        Oscillator {
            base_deg,
            amp_deg: 0.0,
            period: 1.0,
            phase_deg: 0.0,
        }
    }

    pub fn eval(&self, t: usize) -> f64 {
        let w = 2.0 * std::f64::consts::PI * t as f64 / self.period;
        self.base_deg + self.amp_deg * (w + self.phase_deg.to_radians()).sin()
    }
}

/// Absolute upper-arm angles and relative elbow bends, degrees. Angles
/// follow image conventions: 0 points right, 90 points straight down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseAngles {
    pub l_shoulder_deg: f64,
    pub l_elbow_deg: f64,
    pub r_shoulder_deg: f64,
    pub r_elbow_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MotionScript {
    /// Explicit per-frame angles; shorter lists repeat cyclically.
    Keyframes(Vec<PoseAngles>),
    Oscillation {
        l_shoulder: Oscillator,
        l_elbow: Oscillator,
        r_shoulder: Oscillator,
        r_elbow: Oscillator,
    },
}

impl MotionScript {
    pub fn angles(&self, t: usize) -> PoseAngles {
        match self {
            MotionScript::Keyframes(frames) => frames[t % frames.len()],
            MotionScript::Oscillation {
                l_shoulder,
                l_elbow,
                r_shoulder,
                r_elbow,
            } => PoseAngles {
                l_shoulder_deg: l_shoulder.eval(t),
                l_elbow_deg: l_elbow.eval(t),
                r_shoulder_deg: r_shoulder.eval(t),
                r_elbow_deg: r_elbow.eval(t),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BackgroundMode {
    Uniform { gray: u8 },
    Textured { contrast: f64 },
    Scrolling { contrast: f64, speed: f64 },
}

/// A colored disc drawn at a joint, simulating an opportunistic
/// person-specific feature (glove, watch, badge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerSpec {
    pub joint: JointId,
    pub rgb: [u8; 3],
    pub radius: f64,
}

/// Frames `[start, end]` (inclusive) during which `rect` is drawn over the
/// scene; listed joints whose ground-truth position falls inside the rect
/// are flagged occluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcclusionEvent {
    pub start: usize,
    pub end: usize,
    pub joints: Vec<JointId>,
    pub rect: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraShift {
    pub amp_x: f64,
    pub amp_y: f64,
    pub period: f64,
}

impl CameraShift {
    pub fn none() -> Self {
        CameraShift {
            amp_x: 0.0,
            amp_y: 0.0,
            period: 1.0,
        }
    }

    pub fn offset(&self, t: usize) -> (f64, f64) {
        let w = 2.0 * std::f64::consts::PI * t as f64 / self.period;
        (self.amp_x * w.sin(), self.amp_y * (w * 0.5).cos() - self.amp_y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SceneConfig {
    pub n_frames: usize,
    pub width: usize,
    pub height: usize,
    /// Distance between the two shoulder joints, pixels.
    pub shoulder_width: f64,
    pub torso_length: f64,
    pub upper_arm: f64,
    pub lower_arm: f64,
    pub head_radius: f64,
    /// Capsule half-width of arm segments.
    pub limb_radius: f64,
    /// Neck anchor as a fraction of frame size.
    pub neck_fx: f64,
    pub neck_fy: f64,
    pub motion: MotionScript,
    pub background: BackgroundMode,
    pub markers: Vec<MarkerSpec>,
    pub occlusions: Vec<OcclusionEvent>,
    pub camera: CameraShift,
    /// Additive Gaussian RGB noise, 8-bit units.
    pub noise_sigma: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            n_frames: 100,
            width: 256,
            height: 224,
            shoulder_width: 100.0,
            torso_length: 95.0,
            upper_arm: 55.0,
            lower_arm: 50.0,
            head_radius: 20.0,
            limb_radius: 7.0,
            neck_fx: 0.5,
            neck_fy: 0.40,
            motion: MotionScript::Oscillation {
                l_shoulder: Oscillator {
                    base_deg: 115.0,
                    amp_deg: 28.0,
                    period: 90.0,
                    phase_deg: 0.0,
                },
                l_elbow: Oscillator {
                    base_deg: -30.0,
                    amp_deg: 35.0,
                    period: 73.0,
                    phase_deg: 40.0,
                },
                r_shoulder: Oscillator {
                    base_deg: 65.0,
                    amp_deg: 28.0,
                    period: 117.0,
                    phase_deg: 130.0,
                },
                r_elbow: Oscillator {
                    base_deg: 30.0,
                    amp_deg: 35.0,
                    period: 61.0,
                    phase_deg: 250.0,
                },
            },
            background: BackgroundMode::Textured { contrast: 0.18 },
            markers: vec![
                MarkerSpec {
                    joint: JointId::LWrist,
                    rgb: [70, 140, 150],
                    radius: 5.0,
                },
                MarkerSpec {
                    joint: JointId::RWrist,
                    rgb: [150, 90, 120],
                    radius: 5.0,
                },
            ],
            occlusions: Vec::new(),
            camera: CameraShift {
                amp_x: 2.5,
                amp_y: 1.5,
                period: 140.0,
            },
            noise_sigma: 4.0,
        }
    }
}

impl SceneConfig {
    /// The scene used by the end-to-end trend and personalization checks:
    /// 500 frames of two-arm oscillation against a textured background.
    pub fn default_scene(n_frames: usize) -> SceneConfig {
        SceneConfig {
            n_frames,
            ..SceneConfig::default()
        }
    }

    pub fn load(path: &std::path::Path) -> Result<SceneConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: SceneConfig = toml::from_str(&text).map_err(|e| Error::Parse {
            file: path.display().to_string(),
            line: e.span().map(|s| crate::config::line_of(&text, s.start)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self).expect("scene serializes"))?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_frames < 1 {
            return Err(Error::config("n_frames", "must be >= 1"));
        }
        if self.width < 32 || self.height < 32 {
            return Err(Error::config("width/height", "frame must be at least 32x32"));
        }
        for (field, v) in [
            ("shoulder_width", self.shoulder_width),
            ("torso_length", self.torso_length),
            ("upper_arm", self.upper_arm),
            ("lower_arm", self.lower_arm),
            ("head_radius", self.head_radius),
            ("limb_radius", self.limb_radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(field, format!("must be > 0, got {v}")));
            }
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::config("noise_sigma", "must be >= 0"));
        }
        let (w, h) = (self.width as f64, self.height as f64);
        for (i, ev) in self.occlusions.iter().enumerate() {
            let r = &ev.rect;
            let inside =
                r.x0 >= 0.0 && r.y0 >= 0.0 && r.x1 < w && r.y1 < h && r.x0 <= r.x1 && r.y0 <= r.y1;
            if !inside {
                return Err(Error::config(
                    format!("occlusions[{i}].rect"),
                    "occluder rectangle must lie inside the frame",
                ));
            }
            if ev.start > ev.end {
                return Err(Error::config(
                    format!("occlusions[{i}]"),
                    "start must be <= end",
                ));
            }
        }
        Ok(())
    }

    /// Forward kinematics for frame `t`: the seven joint positions.
    pub fn pose(&self, t: usize) -> [(JointId, Point2<f64>); 7] {
        let (dx, dy) = self.camera.offset(t);
        let neck = Point2::new(
            self.width as f64 * self.neck_fx + dx,
            self.height as f64 * self.neck_fy + dy,
        );
        let half = self.shoulder_width / 2.0;
        let l_sh = Point2::new(neck.x - half, neck.y);
        let r_sh = Point2::new(neck.x + half, neck.y);
        let head = Point2::new(neck.x, neck.y - self.head_radius - 10.0);
        let a = self.motion.angles(t);
        let arm = |sh: Point2<f64>, sh_deg: f64, el_deg: f64| {
            let phi = sh_deg.to_radians();
            let elbow = Point2::new(
                sh.x + self.upper_arm * phi.cos(),
                sh.y + self.upper_arm * phi.sin(),
            );
            let psi = (sh_deg + el_deg).to_radians();
            let wrist = Point2::new(
                elbow.x + self.lower_arm * psi.cos(),
                elbow.y + self.lower_arm * psi.sin(),
            );
            (elbow, wrist)
        };
        let (l_el, l_wr) = arm(l_sh, a.l_shoulder_deg, a.l_elbow_deg);
        let (r_el, r_wr) = arm(r_sh, a.r_shoulder_deg, a.r_elbow_deg);
        [
            (JointId::Head, head),
            (JointId::LShoulder, l_sh),
            (JointId::RShoulder, r_sh),
            (JointId::LElbow, l_el),
            (JointId::RElbow, r_el),
            (JointId::LWrist, l_wr),
            (JointId::RWrist, r_wr),
        ]
    }

    /// True when an occlusion event applies to `joint` at frame `t` and its
    /// rectangle geometrically contains `pos`.
    pub fn occludes(&self, t: usize, joint: JointId, pos: Point2<f64>) -> bool {
        self.occlusions.iter().any(|ev| {
            t >= ev.start && t <= ev.end && ev.joints.contains(&joint) && ev.rect.contains(pos)
        })
    }
}

/// Render the whole video. Identical `(cfg, seed)` produce bit-identical
/// frames and ground truth.
pub fn generate_video<S: Real>(cfg: &SceneConfig, seed: u64) -> Result<(FrameStore, GroundTruth<S>)> {
    cfg.validate()?;
    let mut gt = GroundTruth::new();
    for t in 0..cfg.n_frames {
        for (joint, pos) in cfg.pose(t) {
            if !pos.in_bounds(cfg.width, cfg.height) {
                return Err(Error::config(
                    "motion",
                    format!("{} leaves the frame at t={t} ({:.1},{:.1})", joint.name(), pos.x, pos.y),
                ));
            }
            let occ = cfg.occludes(t, joint, pos);
            gt.set(t, joint, Some(pos.cast()), occ);
        }
    }
    use rayon::prelude::*;
    let frames: Vec<_> = (0..cfg.n_frames)
        .into_par_iter()
        .map(|t| render::render_frame(cfg, t, seed))
        .collect();
    Ok((FrameStore::new(frames)?, gt))
}

/// Simulate the high-precision, low-recall initializer: annotate a sampled
/// fraction of frames with noisy ground truth and rare uniform outliers.
pub fn simulate_initializer<S: Real>(
    gt: &GroundTruth<S>,
    n_frames: usize,
    dims: (usize, usize),
    coverage_frac: f64,
    position_noise_sigma: f64,
    fp_rate: f64,
    seed: u64,
) -> AnnotationSet<S> {
    let mut set = AnnotationSet::new();
    let n_sample = (coverage_frac * n_frames as f64).ceil() as usize;
    if n_sample == 0 {
        return set;
    }
    let mut rng = derive_rng(seed, "initializer", 0);
    // Partial Fisher-Yates for a uniform sample of distinct frames.
    let mut frames: Vec<usize> = (0..n_frames).collect();
    for i in 0..n_sample.min(n_frames) {
        let j = rng.gen_range(i..n_frames);
        frames.swap(i, j);
    }
    let mut chosen: Vec<usize> = frames[..n_sample.min(n_frames)].to_vec();
    chosen.sort_unstable();

    let normal = Normal::new(0.0, position_noise_sigma.max(0.0)).expect("sigma >= 0");
    let (w, h) = dims;
    for f in chosen {
        for joint in ALL_JOINTS {
            let Some(entry) = gt.get(f, joint) else { continue };
            if entry.occluded {
                continue;
            }
            let Some(pos) = entry.pos else { continue };
            if rng.gen::<f64>() >= 0.8 {
                continue;
            }
            let mut p = Point2::new(
                pos.x.as_f64() + normal.sample(&mut rng),
                pos.y.as_f64() + normal.sample(&mut rng),
            );
            if rng.gen::<f64>() < fp_rate {
                p = Point2::new(
                    rng.gen_range(0.0..(w as f64 - 1.0)),
                    rng.gen_range(0.0..(h as f64 - 1.0)),
                );
            }
            let p = p.clamp_to(w, h);
            set.insert(Annotation::initial(f, joint, p.cast()));
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_frame_static_scene_matches_kinematics() {
        let mut cfg = SceneConfig::default();
        cfg.n_frames = 1;
        cfg.camera = CameraShift::none();
        cfg.motion = MotionScript::Keyframes(vec![PoseAngles {
            l_shoulder_deg: 120.0,
            l_elbow_deg: -20.0,
            r_shoulder_deg: 60.0,
            r_elbow_deg: 20.0,
        }]);
        let (_store, gt) = generate_video::<f64>(&cfg, 7).unwrap();
        let pose = cfg.pose(0);
        for (joint, pos) in pose {
            let g = gt.position(0, joint).unwrap();
            assert!(g.distance(pos) < 1e-12, "{joint:?}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = SceneConfig::default_scene(5);
        let (a, _) = generate_video::<f64>(&cfg, 42).unwrap();
        let (b, _) = generate_video::<f64>(&cfg, 42).unwrap();
        for (fa, fb) in a.iter().zip(b.iter()) {
            assert_eq!(fa.raw(), fb.raw());
        }
    }

    #[test]
    fn occlusion_flags_follow_events() {
        let mut cfg = SceneConfig::default_scene(30);
        cfg.camera = CameraShift::none();
        // Park the right arm so the wrist stays inside a known box.
        cfg.motion = MotionScript::Keyframes(vec![PoseAngles {
            l_shoulder_deg: 115.0,
            l_elbow_deg: -20.0,
            r_shoulder_deg: 65.0,
            r_elbow_deg: 25.0,
        }]);
        let wrist = cfg.pose(0)[5..]
            .iter()
            .find(|(j, _)| *j == JointId::RWrist)
            .unwrap()
            .1;
        cfg.occlusions = vec![OcclusionEvent {
            start: 10,
            end: 20,
            joints: vec![JointId::RWrist],
            rect: Rect::new(wrist.x - 15.0, wrist.y - 15.0, wrist.x + 15.0, wrist.y + 15.0),
        }];
        let (_, gt) = generate_video::<f64>(&cfg, 1).unwrap();
        for f in 0..30 {
            assert_eq!(gt.occluded(f, JointId::RWrist), (10..=20).contains(&f), "frame {f}");
            assert!(!gt.occluded(f, JointId::LWrist));
        }
    }

    #[test]
    fn invalid_config_names_field() {
        let mut cfg = SceneConfig::default();
        cfg.upper_arm = -3.0;
        match generate_video::<f64>(&cfg, 0) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "upper_arm"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn initializer_zero_coverage_is_empty() {
        let cfg = SceneConfig::default_scene(10);
        let (_, gt) = generate_video::<f64>(&cfg, 3).unwrap();
        let set = simulate_initializer(&gt, 10, (cfg.width, cfg.height), 0.0, 2.0, 0.0, 5);
        assert!(set.is_empty());
    }

    #[test]
    fn initializer_noiseless_hits_ground_truth() {
        let cfg = SceneConfig::default_scene(20);
        let (_, gt) = generate_video::<f64>(&cfg, 3).unwrap();
        let set = simulate_initializer(&gt, 20, (cfg.width, cfg.height), 0.3, 0.0, 0.0, 5);
        assert!(!set.is_empty());
        for (_, a) in set.iter() {
            let g = gt.position(a.frame, a.joint).unwrap();
            assert!(a.pos.distance(g) < 1e-9);
        }
    }

    #[test]
    fn initializer_samples_exact_frame_count() {
        let cfg = SceneConfig::default_scene(500);
        let (_, gt) = generate_video::<f64>(&cfg, 11).unwrap();
        let set = simulate_initializer(&gt, 500, (cfg.width, cfg.height), 0.05, 2.0, 0.0, 17);
        let mut frames: Vec<usize> = set.iter().map(|(_, a)| a.frame).collect();
        frames.sort_unstable();
        frames.dedup();
        assert_eq!(frames.len(), 25);
    }
}
