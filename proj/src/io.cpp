// Copyright 2026 The svx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svx/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace svx {

namespace {

std::vector<unsigned char> read_bytes(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const fs::path& file, const void* data, std::size_t size) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("write failed: " + file.string());
}

// Reads one unsigned header field, skipping whitespace and '#' comments.
long header_number(const std::vector<unsigned char>& bytes, std::size_t& pos, const fs::path& file) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
    throw FormatError(file.string() + ": malformed PPM header");
  }
  long value = 0;
  while (pos < bytes.size() && std::isdigit(bytes[pos])) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > (1L << 30)) throw FormatError(file.string() + ": PPM dimension too large");
    ++pos;
  }
  return value;
}

std::string frame_name(std::size_t t) {
  char name[32];
  std::snprintf(name, sizeof(name), "%05zu.ppm", t);
  return name;
}

std::uint32_t load_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32le(unsigned char* p, std::uint32_t v) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

}  // namespace

PpmImage read_ppm(const fs::path& file) {
  const auto bytes = read_bytes(file);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw FormatError(file.string() + ": not a binary PPM (P6) file");
  }
  std::size_t pos = 2;
  const long width = header_number(bytes, pos, file);
  const long height = header_number(bytes, pos, file);
  const long maxval = header_number(bytes, pos, file);
  if (maxval != 255) throw FormatError(file.string() + ": only maxval 255 is supported");
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw FormatError(file.string() + ": malformed PPM header");
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < 3 * count) throw FormatError(file.string() + ": truncated pixel data");

  PpmImage image{static_cast<int>(width), static_cast<int>(height), std::vector<Rgb>(count)};
  for (std::size_t i = 0; i < count; ++i) {
    image.pixels[i] = {bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
  }
  return image;
}

void write_ppm(const fs::path& file, const PpmImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<unsigned char> data(header.begin(), header.end());
  data.reserve(header.size() + 3 * image.pixels.size());
  for (const auto& p : image.pixels) {
    data.push_back(p.r);
    data.push_back(p.g);
    data.push_back(p.b);
  }
  write_bytes(file, data.data(), data.size());
}

std::vector<fs::path> list_frames(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw IoError("not a directory: " + directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

VideoVolume load_video(const fs::path& directory) {
  const auto files = list_frames(directory);
  if (files.empty()) throw IoError("no .ppm frames in " + directory.string());
  std::vector<Rgb> voxels;
  int width = 0, height = 0;
  for (std::size_t t = 0; t < files.size(); ++t) {
    auto image = read_ppm(files[t]);
    if (t == 0) {
      width = image.width;
      height = image.height;
      voxels.reserve(image.pixels.size() * files.size());
    } else if (image.width != width || image.height != height) {
      throw GeometryError(files[t].string() + ": frame size differs from " + files[0].filename().string());
    }
    voxels.insert(voxels.end(), image.pixels.begin(), image.pixels.end());
  }
  return VideoVolume({width, height, static_cast<int>(files.size())}, std::move(voxels));
}

void save_video(const VideoVolume& video, const fs::path& directory) {
  fs::create_directories(directory);
  for (int t = 0; t < video.frames(); ++t) {
    auto f = video.frame(t);
    write_ppm(directory / frame_name(t), {video.width(), video.height(), {f.begin(), f.end()}});
  }
}

Rgb encode_label(std::uint32_t id) {
  return {static_cast<std::uint8_t>(id & 0xFF), static_cast<std::uint8_t>((id >> 8) & 0xFF),
          static_cast<std::uint8_t>((id >> 16) & 0xFF)};
}

std::uint32_t decode_label(Rgb p) {
  return static_cast<std::uint32_t>(p.r) + 256u * p.g + 65536u * p.b;
}

void save_labels(const LabelVolume& labels, const fs::path& directory) {
  if (labels.num_labels() > kMaxEncodableLabels) {
    throw CapacityError("cannot encode " + std::to_string(labels.num_labels()) +
                        " labels in 24 bits");
  }
  fs::create_directories(directory);
  for (int t = 0; t < labels.frames(); ++t) {
    PpmImage image{labels.width(), labels.height(), {}};
    auto f = labels.frame(t);
    image.pixels.reserve(f.size());
    for (auto id : f) image.pixels.push_back(encode_label(id));
    write_ppm(directory / frame_name(t), image);
  }
}

LabelVolume load_labels(const fs::path& directory) {
  const auto video = load_video(directory);
  std::vector<std::uint32_t> labels(video.size());
  std::transform(video.voxels().begin(), video.voxels().end(), labels.begin(), decode_label);
  return LabelVolume(video.geometry(), std::move(labels));
}

FlowMap read_flow(const fs::path& file) {
  const auto bytes = read_bytes(file);
  if (bytes.size() < 12) throw FormatError(file.string() + ": truncated flow header");
  const float magic = std::bit_cast<float>(load_u32le(bytes.data()));
  if (magic != kFlowMagic) throw FormatError(file.string() + ": bad flow magic");
  const auto width = static_cast<std::int32_t>(load_u32le(bytes.data() + 4));
  const auto height = static_cast<std::int32_t>(load_u32le(bytes.data() + 8));
  if (width <= 0 || height <= 0 || width > (1 << 20) || height > (1 << 20)) {
    throw FormatError(file.string() + ": implausible flow dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - 12 < 8 * count) throw FormatError(file.string() + ": truncated flow data");

  FlowMap map{width, height, std::vector<float>(count), std::vector<float>(count),
              std::vector<std::uint8_t>(count)};
  const unsigned char* p = bytes.data() + 12;
  for (std::size_t i = 0; i < count; ++i) {
    const float u = std::bit_cast<float>(load_u32le(p + 8 * i));
    const float v = std::bit_cast<float>(load_u32le(p + 8 * i + 4));
    map.u[i] = u;
    map.v[i] = v;
    map.valid[i] = std::isfinite(u) && std::isfinite(v) && std::fabs(u) <= kFlowSentinel &&
                   std::fabs(v) <= kFlowSentinel;
  }
  return map;
}

void write_flow(const fs::path& file, const FlowMap& map) {
  const std::size_t count = static_cast<std::size_t>(map.width) * map.height;
  std::vector<unsigned char> data(12 + 8 * count);
  store_u32le(data.data(), std::bit_cast<std::uint32_t>(kFlowMagic));
  store_u32le(data.data() + 4, static_cast<std::uint32_t>(map.width));
  store_u32le(data.data() + 8, static_cast<std::uint32_t>(map.height));
  // Masked pixels are stored with the file format's "unknown flow" value.
  constexpr float kUnknown = 1e10f;
  for (std::size_t i = 0; i < count; ++i) {
    const bool valid = map.valid.empty() || map.valid[i];
    store_u32le(data.data() + 12 + 8 * i, std::bit_cast<std::uint32_t>(valid ? map.u[i] : kUnknown));
    store_u32le(data.data() + 16 + 8 * i, std::bit_cast<std::uint32_t>(valid ? map.v[i] : kUnknown));
  }
  write_bytes(file, data.data(), data.size());
}

FlowField load_flow(const std::vector<fs::path>& files) {
  FlowField field;
  for (const auto& f : files) {
    field.maps.push_back(read_flow(f));
    const auto& m = field.maps.back();
    if (m.width != field.maps.front().width || m.height != field.maps.front().height) {
      throw GeometryError(f.string() + ": flow size differs from the first flow file");
    }
  }
  return field;
}

FlowField load_flow_directory(const fs::path& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw IoError("not a directory: " + directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".flo") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return load_flow(files);
}

GroundTruthSet load_groundtruth(const std::vector<fs::path>& directories, const Geometry& video,
                                std::vector<int> annotated_frames) {
  if (directories.empty()) throw InvalidArgument("no groundtruth directories given");
  if (annotated_frames.empty()) {
    for (int t = 0; t < video.frames; ++t) annotated_frames.push_back(t);
  }
  std::vector<Annotation> annotations;
  for (const auto& dir : directories) {
    const auto labels = load_labels(dir);
    if (labels.width() != video.width || labels.height() != video.height) {
      throw GeometryError(dir.string() + ": groundtruth frame size differs from the video");
    }
    if (static_cast<std::size_t>(labels.frames()) != annotated_frames.size()) {
      throw GeometryError(dir.string() + ": expected " + std::to_string(annotated_frames.size()) +
                          " annotated frames, found " + std::to_string(labels.frames()));
    }
    annotations.push_back({{labels.labels().begin(), labels.labels().end()}});
  }
  return GroundTruthSet(video, std::move(annotated_frames), std::move(annotations));
}

void save_annotation(const GroundTruthSet& gt, std::size_t annotation, const fs::path& directory) {
  const auto& g = gt.geometry();
  const auto& a = gt.annotations().at(annotation);
  LabelVolume frames({g.width, g.height, static_cast<int>(gt.annotated_frames().size())}, a.labels);
  save_labels(frames, directory);
}

DirectoryFrameSource::DirectoryFrameSource(const fs::path& directory) : files_(list_frames(directory)) {
  if (files_.empty()) throw IoError("no .ppm frames in " + directory.string());
}

std::optional<PpmImage> DirectoryFrameSource::next() {
  if (cursor_ >= files_.size()) return std::nullopt;
  return read_ppm(files_[cursor_++]);
}

std::optional<PpmImage> VolumeFrameSource::next() {
  if (cursor_ >= video_.frames()) return std::nullopt;
  auto f = video_.frame(cursor_++);
  return PpmImage{video_.width(), video_.height(), {f.begin(), f.end()}};
}

}  // namespace svx
