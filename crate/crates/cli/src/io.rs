//! 8-bit grayscale image I/O: binary PGM (P5) plus PNG, selected by file
//! extension. All writes go through a temp file in the target directory and
//! a rename, so readers never observe partial output.

use std::fs;
use std::path::{Path, PathBuf};

use eil_core::field::levelset_from_prob;
use eil_core::{BinaryMask, ScalarField2D};

use crate::error::{CliError, CliResult};

/// Row-major 8-bit grayscale image.
pub struct GrayImage {
    pub height: usize,
    pub width: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(pixels.len(), height * width);
        Self {
            height,
            width,
            pixels,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Format {
    Pgm,
    Png,
}

fn format_of(path: &Path) -> CliResult<Format> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("pgm") => Ok(Format::Pgm),
        Some("png") => Ok(Format::Png),
        _ => Err(CliError::input(format!(
            "{}: unsupported image format (use .pgm or .png)",
            path.display()
        ))),
    }
}

pub fn load_gray(path: &Path) -> CliResult<GrayImage> {
    match format_of(path)? {
        Format::Pgm => load_pgm(path),
        Format::Png => load_png(path),
    }
}

pub fn save_gray(path: &Path, image: &GrayImage) -> CliResult<()> {
    let tmp = temp_sibling(path);
    let written = match format_of(path)? {
        Format::Pgm => fs::write(&tmp, encode_pgm(image))
            .map_err(|e| CliError::input(format!("{}: {e}", tmp.display()))),
        Format::Png => image::save_buffer_with_format(
            &tmp,
            &image.pixels,
            image.width as u32,
            image.height as u32,
            image::ExtendedColorType::L8,
            image::ImageFormat::Png,
        )
        .map_err(|e| CliError::input(format!("{}: {e}", tmp.display()))),
    };
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(e);
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::input(format!("{}: {e}", path.display()))
    })
}

fn temp_sibling(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(format!(".tmp{}", std::process::id()));
    path.with_file_name(name)
}

fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
    out.extend_from_slice(&image.pixels);
    out
}

fn load_pgm(path: &Path) -> CliResult<GrayImage> {
    let bytes = fs::read(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let bad = |detail: &str| CliError::input(format!("{}: {detail}", path.display()));

    let mut cursor = 0usize;
    let mut token = |bytes: &[u8]| -> CliResult<Vec<u8>> {
        // Skip whitespace and '#' comment lines between header tokens.
        loop {
            while cursor < bytes.len() && bytes[cursor].is_ascii_whitespace() {
                cursor += 1;
            }
            if cursor < bytes.len() && bytes[cursor] == b'#' {
                while cursor < bytes.len() && bytes[cursor] != b'\n' {
                    cursor += 1;
                }
            } else {
                break;
            }
        }
        let start = cursor;
        while cursor < bytes.len() && !bytes[cursor].is_ascii_whitespace() {
            cursor += 1;
        }
        if start == cursor {
            return Err(CliError::input(format!(
                "{}: truncated PGM header",
                path.display()
            )));
        }
        Ok(bytes[start..cursor].to_vec())
    };

    if token(&bytes)? != b"P5" {
        return Err(bad("not a binary PGM (P5) file"));
    }
    let parse = |raw: Vec<u8>, what: &str| -> CliResult<usize> {
        std::str::from_utf8(&raw)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| bad(&format!("invalid {what} in PGM header")))
    };
    let width = parse(token(&bytes)?, "width")?;
    let height = parse(token(&bytes)?, "height")?;
    let maxval = parse(token(&bytes)?, "maxval")?;
    if width == 0 || height == 0 {
        return Err(bad("zero image dimension"));
    }
    if !(1..=255).contains(&maxval) {
        return Err(bad("only 8-bit PGM (maxval <= 255) is supported"));
    }

    // Exactly one whitespace byte separates the header from the raster.
    if cursor >= bytes.len() || !bytes[cursor].is_ascii_whitespace() {
        return Err(bad("missing raster separator"));
    }
    cursor += 1;
    let data = &bytes[cursor..];
    if data.len() != width * height {
        return Err(bad(&format!(
            "raster holds {} bytes, expected {}",
            data.len(),
            width * height
        )));
    }

    let pixels = if maxval == 255 {
        data.to_vec()
    } else {
        // Rescale shallow bit depths to full range.
        data.iter()
            .map(|&v| ((v as u32 * 255 + maxval as u32 / 2) / maxval as u32) as u8)
            .collect()
    };
    Ok(GrayImage::new(height, width, pixels))
}

fn load_png(path: &Path) -> CliResult<GrayImage> {
    let img = image::open(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        .into_luma8();
    let (width, height) = img.dimensions();
    if width == 0 || height == 0 {
        return Err(CliError::input(format!(
            "{}: zero image dimension",
            path.display()
        )));
    }
    Ok(GrayImage::new(
        height as usize,
        width as usize,
        img.into_raw(),
    ))
}

/// Ground-truth reading: binarize at intensity >= 128.
pub fn mask_from_image(image: &GrayImage) -> BinaryMask {
    BinaryMask::from_fn(image.height, image.width, |r, c| {
        image.pixels[r * image.width + c] >= 128
    })
}

/// Prediction reading: intensity/255 as probability.
pub fn prob_from_image(image: &GrayImage) -> ScalarField2D {
    ScalarField2D::from_fn(image.height, image.width, |r, c| {
        image.pixels[r * image.width + c] as f64 / 255.0
    })
}

/// Prediction reading continued: probability shifted to a level set.
pub fn levelset_from_image(image: &GrayImage) -> CliResult<ScalarField2D> {
    Ok(levelset_from_prob(&prob_from_image(image))?)
}

/// Render a [0,1] field to 8-bit grayscale.
pub fn image_from_unit_field(field: &ScalarField2D) -> GrayImage {
    GrayImage::new(
        field.height(),
        field.width(),
        field
            .data()
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect(),
    )
}

/// Render a mask with chosen background/foreground intensities.
pub fn image_from_mask(mask: &BinaryMask, low: u8, high: u8) -> GrayImage {
    GrayImage::new(
        mask.height(),
        mask.width(),
        mask.bits()
            .iter()
            .map(|&b| if b != 0 { high } else { low })
            .collect(),
    )
}
