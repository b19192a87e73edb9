// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Region cropping over raw rasters. Region coordinates may use a
// bottom-left origin (the dataset convention) or top-left (the raster
// convention); conversion happens here, then the rectangle is clamped to
// the image bounds.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "capgen/base64.hpp"
#include "capgen/corpus.hpp"
#include "capgen/errors.hpp"

namespace capgen::imaging {

/// Decoded interleaved raster, row-major, top-left origin.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    static ImageBuffer make(int w, int h, int c) {
        if (w < 1 || h < 1 || c < 1) throw std::invalid_argument("ImageBuffer: bad dimensions");
        ImageBuffer img;
        img.width = w;
        img.height = h;
        img.channels = c;
        img.pixels.assign(static_cast<std::size_t>(w) * h * c, 0);
        return img;
    }

    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool operator==(const ImageBuffer&) const = default;
};

/// Raised when a region, after origin conversion and clamping, does not
/// intersect the image at all.
class EmptyIntersectionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CropResult {
    ImageBuffer image;
    bool clamped = false;  // true if the region overhung the image bounds
};

inline CropResult crop_region_checked(const ImageBuffer& image, const corpus::Region& region) {
    if (region.width < 1 || region.height < 1)
        throw std::invalid_argument("crop_region: zero-area region");
    int x0 = region.x;
    int y0 = region.origin == corpus::RegionOrigin::bottom_left
                 ? image.height - region.y - region.height
                 : region.y;
    int x1 = x0 + region.width;
    int y1 = y0 + region.height;
    int cx0 = std::max(x0, 0), cy0 = std::max(y0, 0);
    int cx1 = std::min(x1, image.width), cy1 = std::min(y1, image.height);
    if (cx0 >= cx1 || cy0 >= cy1)
        throw EmptyIntersectionError("crop_region: region lies entirely outside the image");

    CropResult result;
    result.clamped = (cx0 != x0 || cy0 != y0 || cx1 != x1 || cy1 != y1);
    result.image = ImageBuffer::make(cx1 - cx0, cy1 - cy0, image.channels);
    const std::size_t row_bytes = static_cast<std::size_t>(result.image.width) * image.channels;
    for (int row = cy0; row < cy1; ++row) {
        const std::uint8_t* src =
            image.pixels.data() +
            (static_cast<std::size_t>(row) * image.width + cx0) * image.channels;
        std::uint8_t* dst =
            result.image.pixels.data() +
            static_cast<std::size_t>(row - cy0) * row_bytes;
        std::copy(src, src + row_bytes, dst);
    }
    return result;
}

inline ImageBuffer crop_region(const ImageBuffer& image, const corpus::Region& region) {
    return crop_region_checked(image, region).image;
}

}  // namespace capgen::imaging
