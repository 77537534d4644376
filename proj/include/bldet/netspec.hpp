#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bldet/common.hpp"

namespace bldet {

enum class LayerKind { Conv, MaxPool, Upsample, ResidualBlock, Dense, SoftmaxHead, PrescaleConv };

struct LayerSpec {
    LayerKind kind;
    int filter = 3;
    int stride = 1;
    int channels_in = 0;
    int channels_out = 0;
};

// One block of the contracting path and its mirror on the expanding path.
// Residual blocks count as units of two convolutions plus the add layer.
struct BlockSpec {
    int conv_layers;  // plain conv layers, or residual units when residual
    bool residual;
};

// Shape-level description of a U-net: symmetric contracting/expanding paths
// around a bottom group, with an optional stride-2 prescale convolution and
// optional auxiliary classification heads fed from the bottleneck.
struct NetSpec {
    std::string name;
    int input_side = 0;
    int input_channels = 1;
    bool prescale_stride2 = false;
    int prescale_filter = 5;
    int base_channels = 32;
    std::vector<BlockSpec> blocks;
    int bottom_convs = 2;
    int aux_heads = 0;
    int dense_bottom_width = 0;
    int conv_filter = 3;
    int output_channels = 1;
};

// 160 px windows, four blocks (two of four convs, two of two convs), dense
// bottleneck with four 2-way softmax heads for the document properties.
inline NetSpec da_net() {
    NetSpec spec;
    spec.name = "DA";
    spec.input_side = 160;
    spec.blocks = {{4, false}, {4, false}, {2, false}, {2, false}};
    spec.aux_heads = 4;
    spec.dense_bottom_width = 512;
    return spec;
}

// 320 px windows prescaled by a stride-2 5x5 convolution, five blocks of
// three residual units each, no auxiliary heads; predicts the central 160 px.
inline NetSpec bl_net() {
    NetSpec spec;
    spec.name = "BL";
    spec.input_side = 320;
    spec.prescale_stride2 = true;
    spec.blocks = {{3, true}, {3, true}, {3, true}, {3, true}, {3, true}};
    return spec;
}

struct StageShape {
    std::string stage;
    int side;
    int channels;
};

// Spatial side halves at the prescale convolution and at each max-pool,
// doubles at each upsample; channels double per contracting block and halve
// per expanding block starting from base_channels.
inline std::vector<StageShape> compute_shapes(const NetSpec& spec) {
    if (spec.input_side < 1) throw ShapeError("input side must be positive");
    std::vector<StageShape> stages;
    stages.push_back({"input", spec.input_side, spec.input_channels});

    int side = spec.input_side;
    if (spec.prescale_stride2) {
        if (side % 2 != 0) throw ShapeError("prescale convolution needs an even input side");
        side /= 2;
        stages.push_back({"prescale", side, spec.base_channels});
    }

    const int n = static_cast<int>(spec.blocks.size());
    for (int i = 1; i <= n; ++i) {
        const int channels = spec.base_channels << (i - 1);
        stages.push_back({"enc" + std::to_string(i), side, channels});
        if (side % 2 != 0) throw ShapeError("spatial side not divisible by 2 at pooling stage " + std::to_string(i));
        side /= 2;
    }

    stages.push_back({"bottom", side, n > 0 ? spec.base_channels << n : spec.input_channels});

    for (int i = n; i >= 1; --i) {
        side *= 2;
        stages.push_back({"dec" + std::to_string(i), side, spec.base_channels << (i - 1)});
    }

    stages.push_back({"output", side, spec.output_channels});
    return stages;
}

inline int count_aux_heads(const NetSpec& spec) { return spec.aux_heads; }

namespace detail {

inline std::int64_t conv_params(int filter, int channels_in, int channels_out) {
    return (static_cast<std::int64_t>(filter) * filter * channels_in + 1) * channels_out;
}

}  // namespace detail

// Trainable parameter count: convolution weights and biases plus dense and
// softmax-head weights; batch-norm statistics are excluded. Expanding blocks
// assume skip concatenation, so their first convolution reads the upsampled
// channels plus the equal-resolution contracting block's channels.
inline std::int64_t count_parameters(const NetSpec& spec) {
    std::int64_t total = 0;
    const int n = static_cast<int>(spec.blocks.size());
    const auto shapes = compute_shapes(spec);  // validates divisibility

    int channels = spec.input_channels;
    if (spec.prescale_stride2) {
        total += detail::conv_params(spec.prescale_filter, channels, spec.base_channels);
        channels = spec.base_channels;
    }

    auto block_params = [&](const BlockSpec& block, int in_channels, int out_channels) {
        std::int64_t p = 0;
        const int convs_per_unit = block.residual ? 2 : 1;
        const int units = block.conv_layers;
        int current = in_channels;
        for (int u = 0; u < units; ++u)
            for (int c = 0; c < convs_per_unit; ++c) {
                p += detail::conv_params(spec.conv_filter, current, out_channels);
                current = out_channels;
            }
        return p;
    };

    for (int i = 1; i <= n; ++i) {
        const int out = spec.base_channels << (i - 1);
        total += block_params(spec.blocks[static_cast<std::size_t>(i - 1)], channels, out);
        channels = out;
    }

    const int bottom_channels = n > 0 ? spec.base_channels << n : channels;
    int current = channels;
    for (int c = 0; c < spec.bottom_convs; ++c) {
        total += detail::conv_params(spec.conv_filter, current, bottom_channels);
        current = bottom_channels;
    }

    if (spec.dense_bottom_width > 0) {
        int bottom_side = spec.input_side;
        if (spec.prescale_stride2) bottom_side /= 2;
        for (int i = 0; i < n; ++i) bottom_side /= 2;
        const std::int64_t dense_inputs = static_cast<std::int64_t>(bottom_side) * bottom_side * channels;
        total += dense_inputs * spec.dense_bottom_width + spec.dense_bottom_width;
        total += static_cast<std::int64_t>(spec.aux_heads) * (spec.dense_bottom_width * 2 + 2);
    }

    current = bottom_channels;
    for (int i = n; i >= 1; --i) {
        const int out = spec.base_channels << (i - 1);
        total += block_params(spec.blocks[static_cast<std::size_t>(i - 1)], current + out, out);
        current = out;
    }

    if (n > 0) {
        total += detail::conv_params(spec.conv_filter, current, spec.output_channels);
        total += detail::conv_params(spec.conv_filter, spec.output_channels, spec.output_channels);
    }

    (void)shapes;
    return total;
}

}  // namespace bldet
