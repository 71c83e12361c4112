//! Example models shipped inside the binary.

use subadj_core::families::FamilyModel;
use subadj_core::surfaces::SurfaceModel;

use crate::schema::{self, ModelFile};
use crate::CliError;

pub const BUNDLED: &[(&str, &str)] = &[
    ("universal4.json", include_str!("../models/universal4.json")),
    ("universal4-family.json", include_str!("../models/universal4-family.json")),
    ("remark5.json", include_str!("../models/remark5.json")),
    ("remark5-left.json", include_str!("../models/remark5-left.json")),
    ("remark5-right.json", include_str!("../models/remark5-right.json")),
    ("multiplicity2.json", include_str!("../models/multiplicity2.json")),
    ("example8-n3.json", include_str!("../models/example8-n3.json")),
    ("five-point-tree.json", include_str!("../models/five-point-tree.json")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    let name = name.rsplit('/').next().unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

fn bundled_or_err(name: &str) -> Result<String, CliError> {
    bundled(name)
        .map(str::to_string)
        .ok_or_else(|| CliError::Io(format!("no bundled model `{name}`")))
}

pub fn surface(name: &str) -> Result<SurfaceModel, CliError> {
    match schema::parse_model(&bundled_or_err(name)?, name)? {
        ModelFile::Surface(s) => s.build(),
        ModelFile::Family(_) => Err(CliError::Schema(format!("`{name}` is a family model"))),
    }
}

pub fn family(name: &str) -> Result<FamilyModel, CliError> {
    match schema::parse_model(&bundled_or_err(name)?, name)? {
        ModelFile::Family(f) => f.build(&bundled_or_err),
        ModelFile::Surface(_) => Err(CliError::Schema(format!("`{name}` is a surface model"))),
    }
}
