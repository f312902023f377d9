//! Rasterizer for the articulated figure: anti-aliased filled capsules and
//! discs over a procedural background.

use rand_distr::{Distribution, Normal};

use crate::geom::Point2;
use crate::rng::{derive_rng, derive_seed};
use crate::video::Frame;

use super::{BackgroundMode, SceneConfig};

const TORSO_RGB: [u8; 3] = [62, 74, 138];
const UPPER_ARM_RGB: [u8; 3] = [88, 120, 88];
const LOWER_ARM_RGB: [u8; 3] = [120, 108, 82];
const HEAD_RGB: [u8; 3] = [196, 166, 142];
const OCCLUDER_RGB: [u8; 3] = [58, 52, 48];

fn hash2(x: i64, y: i64, seed: u64) -> f64 {
    let mut state = seed
        ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (y as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
    state = (state ^ (state >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    state = (state ^ (state >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ((state ^ (state >> 31)) >> 11) as f64 / (1u64 << 53) as f64
}

/// Bilinear lattice noise with spacing `g`.
fn lattice(x: f64, y: f64, g: f64, seed: u64) -> f64 {
    let gx = x / g;
    let gy = y / g;
    let x0 = gx.floor();
    let y0 = gy.floor();
    let ax = gx - x0;
    let ay = gy - y0;
    let (x0, y0) = (x0 as i64, y0 as i64);
    let v00 = hash2(x0, y0, seed);
    let v10 = hash2(x0 + 1, y0, seed);
    let v01 = hash2(x0, y0 + 1, seed);
    let v11 = hash2(x0 + 1, y0 + 1, seed);
    (v00 * (1.0 - ax) + v10 * ax) * (1.0 - ay) + (v01 * (1.0 - ax) + v11 * ax) * ay
}

fn background_value(mode: &BackgroundMode, x: f64, y: f64, t: usize, seed: u64) -> [u8; 3] {
    match mode {
        BackgroundMode::Uniform { gray } => [*gray; 3],
        BackgroundMode::Textured { contrast } => textured(x, y, *contrast, seed),
        BackgroundMode::Scrolling { contrast, speed } => {
            textured(x + speed * t as f64, y, *contrast, seed)
        }
    }
}

fn textured(x: f64, y: f64, contrast: f64, seed: u64) -> [u8; 3] {
    let coarse = lattice(x, y, 23.0, seed);
    let fine = lattice(x, y, 5.0, seed ^ 0x5bd1_e995);
    let v = 120.0 + (0.7 * coarse + 0.3 * fine - 0.5) * contrast * 510.0;
    let g = v.clamp(0.0, 255.0) as u8;
    // A hint of channel separation keeps the texture from being pure gray.
    let r = (v * 0.96).clamp(0.0, 255.0) as u8;
    let b = (v * 1.04).clamp(0.0, 255.0) as u8;
    [r, g, b]
}

fn dist_to_segment(p: Point2<f64>, a: Point2<f64>, b: Point2<f64>) -> f64 {
    let vx = b.x - a.x;
    let vy = b.y - a.y;
    let len2 = vx * vx + vy * vy;
    let t = if len2 <= f64::EPSILON {
        0.0
    } else {
        (((p.x - a.x) * vx + (p.y - a.y) * vy) / len2).clamp(0.0, 1.0)
    };
    let cx = a.x + t * vx;
    let cy = a.y + t * vy;
    ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()
}

struct Capsule {
    a: Point2<f64>,
    b: Point2<f64>,
    radius: f64,
    rgb: [u8; 3],
}

impl Capsule {
    fn coverage(&self, p: Point2<f64>) -> f64 {
        // 1 px smooth edge centered on the capsule boundary.
        (self.radius - dist_to_segment(p, self.a, self.b) + 0.5).clamp(0.0, 1.0)
    }

    fn bounds(&self, w: usize, h: usize) -> (usize, usize, usize, usize) {
        let m = self.radius + 1.5;
        let x0 = (self.a.x.min(self.b.x) - m).floor().max(0.0) as usize;
        let y0 = (self.a.y.min(self.b.y) - m).floor().max(0.0) as usize;
        let x1 = (self.a.x.max(self.b.x) + m).ceil().min(w as f64 - 1.0) as usize;
        let y1 = (self.a.y.max(self.b.y) + m).ceil().min(h as f64 - 1.0) as usize;
        (x0, y0, x1, y1)
    }
}

fn composite(frame: &mut Frame, cap: &Capsule) {
    let (x0, y0, x1, y1) = cap.bounds(frame.width(), frame.height());
    for y in y0..=y1 {
        for x in x0..=x1 {
            let alpha = cap.coverage(Point2::new(x as f64, y as f64));
            if alpha <= 0.0 {
                continue;
            }
            let dst = frame.get(x, y);
            let mut out = [0u8; 3];
            for c in 0..3 {
                let v = alpha * cap.rgb[c] as f64 + (1.0 - alpha) * dst[c] as f64;
                out[c] = v.round().clamp(0.0, 255.0) as u8;
            }
            frame.set(x, y, out);
        }
    }
}

pub fn render_frame(cfg: &SceneConfig, t: usize, seed: u64) -> Frame {
    let mut frame = Frame::new(cfg.width, cfg.height);
    let tex_seed = derive_seed(seed, "texture", 0);
    for y in 0..cfg.height {
        for x in 0..cfg.width {
            frame.set(
                x,
                y,
                background_value(&cfg.background, x as f64, y as f64, t, tex_seed),
            );
        }
    }

    let pose = cfg.pose(t);
    let at = |j: crate::anno::JointId| pose.iter().find(|(jj, _)| *jj == j).unwrap().1;
    use crate::anno::JointId::*;
    let neck = Point2::new((at(LShoulder).x + at(RShoulder).x) / 2.0, at(LShoulder).y);
    let pelvis = Point2::new(neck.x, neck.y + cfg.torso_length);

    composite(
        &mut frame,
        &Capsule {
            a: neck,
            b: pelvis,
            radius: cfg.shoulder_width * 0.46,
            rgb: TORSO_RGB,
        },
    );
    composite(
        &mut frame,
        &Capsule {
            a: at(Head),
            b: at(Head),
            radius: cfg.head_radius,
            rgb: HEAD_RGB,
        },
    );
    for (sh, el, wr) in [(LShoulder, LElbow, LWrist), (RShoulder, RElbow, RWrist)] {
        composite(
            &mut frame,
            &Capsule {
                a: at(sh),
                b: at(el),
                radius: cfg.limb_radius,
                rgb: UPPER_ARM_RGB,
            },
        );
        composite(
            &mut frame,
            &Capsule {
                a: at(el),
                b: at(wr),
                radius: cfg.limb_radius,
                rgb: LOWER_ARM_RGB,
            },
        );
    }
    for m in &cfg.markers {
        composite(
            &mut frame,
            &Capsule {
                a: at(m.joint),
                b: at(m.joint),
                radius: m.radius,
                rgb: m.rgb,
            },
        );
    }

    for ev in &cfg.occlusions {
        if t < ev.start || t > ev.end {
            continue;
        }
        let r = &ev.rect;
        for y in r.y0.floor().max(0.0) as usize..=(r.y1.ceil() as usize).min(cfg.height - 1) {
            for x in r.x0.floor().max(0.0) as usize..=(r.x1.ceil() as usize).min(cfg.width - 1) {
                if r.contains(Point2::new(x as f64, y as f64)) {
                    // Faint texture so the occluder is not a flat zero-gradient hole.
                    let n = (hash2(x as i64, y as i64, tex_seed ^ 0xacc1) - 0.5) * 24.0;
                    let mut rgb = OCCLUDER_RGB;
                    for c in rgb.iter_mut() {
                        *c = (*c as f64 + n).clamp(0.0, 255.0) as u8;
                    }
                    frame.set(x, y, rgb);
                }
            }
        }
    }

    if cfg.noise_sigma > 0.0 {
        let mut rng = derive_rng(seed, "frame-noise", t as u64);
        let normal = Normal::new(0.0, cfg.noise_sigma).expect("sigma > 0");
        let mut data = frame.raw().to_vec();
        for v in data.iter_mut() {
            let n: f64 = normal.sample(&mut rng);
            *v = (*v as f64 + n).round().clamp(0.0, 255.0) as u8;
        }
        frame = Frame::from_raw(cfg.width, cfg.height, data).expect("size unchanged");
    }
    frame
}
