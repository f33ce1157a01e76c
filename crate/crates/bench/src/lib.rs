//! Shared benchmark fixtures.

use mbbox_core::closed_form::Kinematics;

/// Representative Euclidean points: balanced, mildly and strongly hierarchical.
pub fn massless_points() -> Vec<(&'static str, Kinematics)> {
    vec![
        ("s=t", Kinematics::massless(-1.0, -1.0, 0.3)),
        ("s/t=1/2", Kinematics::massless(-1.0, -2.0, 0.3)),
        ("s/t=1/6", Kinematics::massless(-0.5, -3.0, 0.2)),
    ]
}

pub fn onemass_points() -> Vec<(&'static str, Kinematics)> {
    vec![
        ("balanced", Kinematics::onemass(-1.0, -2.0, -0.5, 0.3)),
        ("heavy", Kinematics::onemass(-2.0, -0.5, -1.0, 0.25)),
    ]
}
