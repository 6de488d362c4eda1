use super::ir::{Plate, Stage, StageEntry};
use crate::optics::canonical_angle;

const ANGLE_TOL: f64 = 1e-12;

/// Removes element pairs that multiply to the identity.
///
/// * Two HWPs at the same angle (mod π) on one path, with nothing touching
///   that path in between.
/// * Adjacent routings that undo each other, and identity routings.
pub fn peephole(mut stages: Vec<StageEntry>) -> Vec<StageEntry> {
    loop {
        if let Some((i, j)) = find_hwp_pair(&stages) {
            stages.remove(j);
            stages.remove(i);
            continue;
        }
        if let Some(i) = stages.iter().position(|e| is_identity_routing(&e.stage)) {
            stages.remove(i);
            continue;
        }
        if let Some(i) = (0..stages.len().saturating_sub(1))
            .find(|&i| routings_cancel(&stages[i].stage, &stages[i + 1].stage))
        {
            stages.drain(i..i + 2);
            continue;
        }
        return stages;
    }
}

fn find_hwp_pair(stages: &[StageEntry]) -> Option<(usize, usize)> {
    for (i, entry) in stages.iter().enumerate() {
        let Stage::Waveplate {
            path,
            plate: Plate::Half,
            angle,
        } = entry.stage
        else {
            continue;
        };
        let next = stages[i + 1..]
            .iter()
            .position(|e| e.stage.touches_path(path))?
            + i
            + 1;
        if let Stage::Waveplate {
            path: p,
            plate: Plate::Half,
            angle: b,
        } = stages[next].stage
        {
            let diff = canonical_angle(angle - b);
            if p == path && (diff < ANGLE_TOL || std::f64::consts::PI - diff < ANGLE_TOL) {
                return Some((i, next));
            }
        }
    }
    None
}

fn is_identity_routing(stage: &Stage) -> bool {
    matches!(stage, Stage::Routing { perm } if perm.iter().enumerate().all(|(i, &p)| i == p))
}

fn routings_cancel(a: &Stage, b: &Stage) -> bool {
    match (a, b) {
        (Stage::Routing { perm: p }, Stage::Routing { perm: q }) => {
            // applying p then q sends output i to input p[q[i]]
            q.iter().enumerate().all(|(i, &qi)| p.get(qi) == Some(&i))
        }
        _ => false,
    }
}
