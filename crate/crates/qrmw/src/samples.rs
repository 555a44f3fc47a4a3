//! Built-in demonstration images.

use crate::geometry::{ImageGeometry, PixelAddress};
use crate::image::ClassicalImage;

/// Four-channel 8-row by 4-column image whose nonzero cells form nine
/// full-height columns of color 255: channel 0 lit in columns 0 and 3,
/// channel 1 in columns 1 and 3, channel 2 in column 2, and channel 3 in
/// every column. All remaining cells are 0.
///
/// The layout exercises both compression paths: every lit column collapses
/// to one operator, and the all-lit channel collapses further when position
/// bits may also become don't-cares.
pub fn column_stripes() -> ClassicalImage {
    let geometry = ImageGeometry::new(8, 4, 3, 2).expect("valid demo geometry");
    let lit: [(u64, u64); 9] = [
        (0, 0),
        (0, 3),
        (1, 1),
        (1, 3),
        (2, 2),
        (3, 0),
        (3, 1),
        (3, 2),
        (3, 3),
    ];
    let mut image = ClassicalImage::new(geometry).expect("desk-scale image");
    for (lambda, x) in lit {
        for y in 0..geometry.rows() {
            image = image
                .set(PixelAddress::new(lambda, y, x), 255)
                .expect("in-range by construction");
        }
    }
    image
}

/// Copy of an image with every nonzero color replaced by `2^q - 1` for the
/// given reduced depth; useful for fitting wide images under a simulator cap.
pub fn threshold_colors(image: &ClassicalImage, q: u32) -> ClassicalImage {
    let g = image.geometry();
    let geometry = ImageGeometry::new(q, g.channel_count(), g.row_bits(), g.col_bits())
        .expect("reducing q keeps the geometry valid");
    let values = image
        .values()
        .iter()
        .map(|&v| if v == 0 { 0 } else { geometry.max_color() })
        .collect();
    ClassicalImage::from_values(geometry, values).expect("thresholded values are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_image_has_72_lit_cells() {
        let img = column_stripes();
        assert_eq!(img.values().iter().filter(|&&v| v == 255).count(), 72);
        assert_eq!(img.values().iter().filter(|&&v| v == 0).count(), 56);
    }

    #[test]
    fn threshold_keeps_support() {
        let img = threshold_colors(&column_stripes(), 1);
        assert_eq!(img.geometry().color_bits(), 1);
        assert_eq!(img.values().iter().filter(|&&v| v == 1).count(), 72);
    }
}
