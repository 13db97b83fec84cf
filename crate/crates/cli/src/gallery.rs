//! Example problems shipped with the binary.

use crate::problem::{InputError, Problem};

pub const GALLERY: &[(&str, &str)] = &[
    ("free_particle_1d", include_str!("../gallery/free_particle_1d.json")),
    ("constant_force", include_str!("../gallery/constant_force.json")),
    ("oscillator", include_str!("../gallery/oscillator.json")),
    ("free_particle_2d", include_str!("../gallery/free_particle_2d.json")),
    ("central_force_2d", include_str!("../gallery/central_force_2d.json")),
    ("levy_cerruti_plane", include_str!("../gallery/levy_cerruti_plane.json")),
];

pub fn problems() -> Result<Vec<Problem>, InputError> {
    GALLERY.iter().map(|(name, text)| Problem::from_json(name, text)).collect()
}
