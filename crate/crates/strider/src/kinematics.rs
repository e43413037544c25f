//! Planar leg kinematics: forward kinematics, closed-form inverse kinematics,
//! and the height-conditioned joint-space offset posture.
//!
//! The leg is a sagittal three-joint chain (hip pitch, knee pitch, ankle
//! pitch) hanging from the hip origin. Link angles are measured from the
//! straight-down configuration, positive rotating the link toward +x:
//!
//! ```text
//! alpha_thigh = q_hip
//! alpha_shank = q_hip - q_knee          (positive knee = flexion, foot moves back)
//! alpha_foot  = q_hip - q_knee - q_ankle
//! ```
//!
//! so the all-zero joint vector is a straight leg with a flat sole. The foot
//! pose reported by [`fk_foot`] is the sole reference point directly under
//! the ankle, plus the sole pitch (zero when flat).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Joints per leg (hip pitch, knee pitch, ankle pitch).
pub const JOINTS_PER_LEG: usize = 3;
/// Total actuated leg joints, ordered `[L-hip, L-knee, L-ankle, R-hip, R-knee, R-ankle]`.
pub const LEG_JOINTS: usize = 2 * JOINTS_PER_LEG;

#[derive(Debug, Error, PartialEq)]
pub enum KinError {
    /// Target height or foot position is outside the reachable workspace.
    #[error("target out of workspace: {0}")]
    OutOfWorkspace(String),
}

/// Geometry and limits of one leg. Both legs are identical.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LegParams {
    /// Hip-to-knee link length (m).
    pub thigh_length: f64,
    /// Knee-to-ankle link length (m).
    pub shank_length: f64,
    /// Ankle-to-sole vertical offset (m).
    pub foot_height: f64,
    /// Kept for schema parity with 3-D robots; zero in planar mode.
    pub hip_lateral_offset: f64,
    /// `[min, max]` radians per joint: hip pitch, knee pitch, ankle pitch.
    pub joint_limits: [[f64; 2]; JOINTS_PER_LEG],
    /// `[z_min, z_max]` band of base heights accepted by [`ik_height`].
    pub height_band: [f64; 2],
}

impl Default for LegParams {
    fn default() -> Self {
        Self {
            thigh_length: 0.4,
            shank_length: 0.4,
            foot_height: 0.05,
            hip_lateral_offset: 0.0,
            joint_limits: [[-1.3, 1.3], [-0.1, 2.4], [-1.0, 1.0]],
            height_band: [0.58, 0.84],
        }
    }
}

impl LegParams {
    /// Maximum hip-to-sole distance with the leg straight.
    pub fn max_reach(&self) -> f64 {
        self.thigh_length + self.shank_length + self.foot_height
    }

    /// Checks the stated invariants; call after deserializing a config.
    pub fn validate(&self) -> Result<(), String> {
        if self.thigh_length <= 0.0 || self.shank_length <= 0.0 || self.foot_height < 0.0 {
            return Err("leg link lengths must be positive".into());
        }
        for (j, lim) in self.joint_limits.iter().enumerate() {
            if lim[0] >= lim[1] {
                return Err(format!("joint {j} limits must satisfy min < max"));
            }
        }
        if self.height_band[0] >= self.height_band[1] {
            return Err("height band must satisfy min < max".into());
        }
        if self.height_band[1] > self.max_reach() {
            return Err("height band exceeds maximum leg reach".into());
        }
        Ok(())
    }
}

/// What a joint vector means in the control pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointRole {
    /// Height-conditioned offset posture.
    Offset,
    /// Policy residual on top of the offset.
    Residual,
    /// Final position command sent to the PD loop.
    Command,
    /// Kinematic reference used only by training rewards.
    Reference,
    /// Measured joint positions.
    Measured,
}

/// Leg joint angles plus a tag saying which pipeline quantity they are.
#[derive(Debug, Clone, PartialEq)]
pub struct JointVector {
    pub values: [f64; LEG_JOINTS],
    pub role: JointRole,
}

impl JointVector {
    pub fn new(values: [f64; LEG_JOINTS], role: JointRole) -> Self {
        Self { values, role }
    }

    pub fn zeros(role: JointRole) -> Self {
        Self { values: [0.0; LEG_JOINTS], role }
    }

    /// Left-leg slice `[hip, knee, ankle]`.
    pub fn left(&self) -> &[f64] {
        &self.values[..JOINTS_PER_LEG]
    }

    /// Right-leg slice `[hip, knee, ankle]`.
    pub fn right(&self) -> &[f64] {
        &self.values[JOINTS_PER_LEG..]
    }

    /// Clamps every joint to its limits. Returns true if anything was clamped.
    pub fn clamp_to_limits(&mut self, params: &LegParams) -> bool {
        let mut clamped = false;
        for (i, v) in self.values.iter_mut().enumerate() {
            let lim = params.joint_limits[i % JOINTS_PER_LEG];
            let c = v.clamp(lim[0], lim[1]);
            if c != *v {
                *v = c;
                clamped = true;
            }
        }
        clamped
    }
}

/// Planar foot pose relative to the hip origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootPose {
    /// Sole reference point, forward of the hip (m).
    pub x: f64,
    /// Sole reference point, above the hip (m); negative below.
    pub z: f64,
    /// Sole pitch (rad); zero when the sole is flat on level ground.
    pub pitch: f64,
}

/// Unit vector pointing straight down, rotated by `alpha` toward +x.
#[inline]
fn down(alpha: f64) -> (f64, f64) {
    (alpha.sin(), -alpha.cos())
}

/// Forward kinematics for one leg: sole reference point and sole pitch
/// relative to the hip origin.
pub fn fk_foot(q: &[f64], params: &LegParams) -> FootPose {
    assert_eq!(q.len(), JOINTS_PER_LEG, "fk_foot wants one leg's joints");
    let a_thigh = q[0];
    let a_shank = q[0] - q[1];
    let a_foot = q[0] - q[1] - q[2];
    let (tx, tz) = down(a_thigh);
    let (sx, sz) = down(a_shank);
    let (fx, fz) = down(a_foot);
    FootPose {
        x: params.thigh_length * tx + params.shank_length * sx + params.foot_height * fx,
        z: params.thigh_length * tz + params.shank_length * sz + params.foot_height * fz,
        pitch: a_foot,
    }
}

/// Analytic Jacobian of [`fk_foot`]: rows (x, z, pitch), columns (hip, knee, ankle).
pub fn fk_foot_jacobian(q: &[f64], params: &LegParams) -> [[f64; 3]; 3] {
    let a_thigh = q[0];
    let a_shank = q[0] - q[1];
    let a_foot = q[0] - q[1] - q[2];
    // d/d(alpha) of down(alpha) is (cos, sin); chain in the joint signs.
    let (tc, ts) = (a_thigh.cos(), a_thigh.sin());
    let (sc, ss) = (a_shank.cos(), a_shank.sin());
    let (fc, fs) = (a_foot.cos(), a_foot.sin());
    let l1 = params.thigh_length;
    let l2 = params.shank_length;
    let hf = params.foot_height;
    [
        [
            l1 * tc + l2 * sc + hf * fc,
            -(l2 * sc + hf * fc),
            -hf * fc,
        ],
        [
            l1 * ts + l2 * ss + hf * fs,
            -(l2 * ss + hf * fs),
            -hf * fs,
        ],
        [1.0, -1.0, -1.0],
    ]
}

/// Inverse kinematics for one leg, knee-backward (anthropomorphic) branch.
pub fn ik_foot(target: FootPose, params: &LegParams) -> Result<[f64; JOINTS_PER_LEG], KinError> {
    let l1 = params.thigh_length;
    let l2 = params.shank_length;
    // Sole = ankle + foot_height * down(pitch), so peel the foot link off first.
    let (px, pz) = down(target.pitch);
    let ax = target.x - params.foot_height * px;
    let az = target.z - params.foot_height * pz;
    let d2 = ax * ax + az * az;
    let d = d2.sqrt();
    let eps = 1e-12;
    if d > l1 + l2 + eps {
        return Err(KinError::OutOfWorkspace(format!(
            "ankle target at {d:.4} m exceeds reach {:.4} m",
            l1 + l2
        )));
    }
    if d < (l1 - l2).abs() - eps || d < 1e-9 {
        return Err(KinError::OutOfWorkspace(format!(
            "ankle target at {d:.4} m inside minimum reach"
        )));
    }
    let cos_knee = ((d2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)).clamp(-1.0, 1.0);
    let knee = cos_knee.acos();
    let gamma = ax.atan2(-az);
    let cos_delta = ((l1 * l1 + d2 - l2 * l2) / (2.0 * l1 * d)).clamp(-1.0, 1.0);
    let hip = gamma + cos_delta.acos();
    let ankle = (hip - knee) - target.pitch;
    Ok([hip, knee, ankle])
}

/// Height-conditioned offset posture: both feet flat, directly below the hip,
/// hip-to-sole distance exactly `z_star`.
pub fn ik_height(z_star: f64, params: &LegParams) -> Result<JointVector, KinError> {
    let [z_min, z_max] = params.height_band;
    if !(z_star >= z_min && z_star <= z_max) {
        return Err(KinError::OutOfWorkspace(format!(
            "height command {z_star:.3} m outside band [{z_min:.3}, {z_max:.3}]"
        )));
    }
    let leg = ik_foot(FootPose { x: 0.0, z: -z_star, pitch: 0.0 }, params)?;
    Ok(JointVector::new(
        [leg[0], leg[1], leg[2], leg[0], leg[1], leg[2]],
        JointRole::Offset,
    ))
}
