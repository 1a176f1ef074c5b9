//! Plot-data emission for polygons: exact JSON or CSV with a decimal
//! convenience column.

use lnp_core::geometry::LowerConvexPolygon;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn emit_polygon(polygon: &LowerConvexPolygon, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(polygon).expect("polygon serializes"),
        Format::Csv => polygon
            .vertices()
            .iter()
            .map(|(x, y)| {
                let approx = y.to_f64().unwrap_or(f64::NAN);
                format!("{x},{}/{},{approx:?}", y.numer(), y.denom())
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}
