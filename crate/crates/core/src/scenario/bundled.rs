//! Scenario files shipped with the crate, one per acceptance criterion.

/// `(name, json)` pairs in a fixed order.
pub const BUNDLED: &[(&str, &str)] = &[
    ("constitutive_oracle", include_str!("../../scenarios/constitutive_oracle.json")),
    ("grouping_preset", include_str!("../../scenarios/grouping_preset.json")),
    ("invariance_shear_neohookean", include_str!("../../scenarios/invariance_shear_neohookean.json")),
    ("invariance_sinusoidal_graded", include_str!("../../scenarios/invariance_sinusoidal_graded.json")),
    ("noether_graded", include_str!("../../scenarios/noether_graded.json")),
    ("noether_harmonic", include_str!("../../scenarios/noether_harmonic.json")),
    ("power_shear_neohookean", include_str!("../../scenarios/power_shear_neohookean.json")),
    ("power_sinusoidal_graded", include_str!("../../scenarios/power_sinusoidal_graded.json")),
    ("standard_power", include_str!("../../scenarios/standard_power.json")),
    ("stvk_uniaxial", include_str!("../../scenarios/stvk_uniaxial.json")),
    ("surface_graded_control", include_str!("../../scenarios/surface_graded_control.json")),
    ("surface_harmonic", include_str!("../../scenarios/surface_harmonic.json")),
    ("torque_identities", include_str!("../../scenarios/torque_identities.json")),
];

pub fn find(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
