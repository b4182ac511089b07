//! Edge detection by 1-D derivative filtering of a scanned image.

use crate::derivative::{filter_signal, DerivativeKernel, FilterMode};
use crate::imageio::{flatten, normalize_display, unflatten, GrayImage, ScanDirection};

/// Raw (signed, unnormalised) edge response: the image is scanned in
/// `direction`, filtered in `same` mode and folded back to its shape.
pub fn edge_response(
    img: &GrayImage,
    kernel: &DerivativeKernel,
    direction: ScanDirection,
) -> crate::Result<GrayImage> {
    let x = flatten(img, direction);
    let y = filter_signal(&x, kernel, FilterMode::Same)?;
    Ok(unflatten(&y, img.rows(), img.cols(), img.maxval(), direction)
        .expect("same-mode filtering preserves length"))
}

/// Edge response mapped to 0..=255 for display.
pub fn edge_map(
    img: &GrayImage,
    kernel: &DerivativeKernel,
    direction: ScanDirection,
) -> crate::Result<GrayImage> {
    edge_response(img, kernel, direction).map(|r| normalize_display(&r))
}
