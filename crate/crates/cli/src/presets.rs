//! Embedded figure presets.

pub const PRESETS: [(&str, &str); 7] = [
    ("fig2a", include_str!("../presets/fig2a.toml")),
    ("fig2b", include_str!("../presets/fig2b.toml")),
    ("fig2c", include_str!("../presets/fig2c.toml")),
    ("fig2d", include_str!("../presets/fig2d.toml")),
    ("fig2e", include_str!("../presets/fig2e.toml")),
    ("fig2f", include_str!("../presets/fig2f.toml")),
    ("fig2g", include_str!("../presets/fig2g.toml")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}
