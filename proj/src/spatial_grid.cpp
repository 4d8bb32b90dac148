#include "hetnet/spatial_grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace hetnet
{

SpatialGrid::SpatialGrid(const std::vector<Point>& points, double half_width,
                         double points_per_cell)
    : points_(points), origin_(-half_width)
{
    if (!(half_width > 0.0) || !(points_per_cell > 0.0))
    {
        throw std::invalid_argument("SpatialGrid: half_width and points_per_cell must be > 0");
    }
    const double cells = std::max(1.0, static_cast<double>(points.size()) / points_per_cell);
    dim_ = std::clamp(static_cast<int>(std::sqrt(cells)), 1, 4096);
    cell_ = 2.0 * half_width / dim_;

    const std::size_t n_cells = static_cast<std::size_t>(dim_) * dim_;
    std::vector<std::uint32_t> cell_of(points_.size());
    offsets_.assign(n_cells + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i)
    {
        const std::size_t c
            = static_cast<std::size_t>(cell_coord(points_[i].y)) * dim_ + cell_coord(points_[i].x);
        cell_of[i] = static_cast<std::uint32_t>(c);
        ++offsets_[c + 1];
    }
    for (std::size_t c = 0; c < n_cells; ++c)
    {
        offsets_[c + 1] += offsets_[c];
    }
    order_.resize(points_.size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i)
    {
        order_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
    }
}

int SpatialGrid::cell_coord(double v) const
{
    const double c = std::floor((v - origin_) / cell_);
    if (!(c >= 0.0))
    {
        return 0;
    }
    return c >= dim_ ? dim_ - 1 : static_cast<int>(c);
}

SpatialGrid::Hit SpatialGrid::nearest(Point q) const
{
    Hit best;
    if (points_.empty())
    {
        return best;
    }
    const int qx = cell_coord(q.x);
    const int qy = cell_coord(q.y);
    // Distance from q to the outside of its cell box, used to bound each ring.
    const double lo_x = origin_ + qx * cell_;
    const double lo_y = origin_ + qy * cell_;
    const double margin = std::max(
        0.0, std::min({q.x - lo_x, lo_x + cell_ - q.x, q.y - lo_y, lo_y + cell_ - q.y}));

    auto scan = [&](int cx, int cy) {
        if (cx < 0 || cy < 0 || cx >= dim_ || cy >= dim_)
        {
            return;
        }
        const std::size_t cell = static_cast<std::size_t>(cy) * dim_ + cx;
        for (std::uint32_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k)
        {
            const std::uint32_t i = order_[k];
            const double d2 = distance2(points_[i], q);
            if (d2 < best.d2 || (d2 == best.d2 && i < best.index))
            {
                best = {i, d2};
            }
        }
    };

    for (int ring = 0; ring <= dim_; ++ring)
    {
        if (ring == 0)
        {
            scan(qx, qy);
        }
        else
        {
            for (int d = -ring; d <= ring; ++d)
            {
                scan(qx + d, qy - ring);
                scan(qx + d, qy + ring);
            }
            for (int d = -ring + 1; d <= ring - 1; ++d)
            {
                scan(qx - ring, qy + d);
                scan(qx + ring, qy + d);
            }
        }
        // Anything beyond this ring is at least (ring * cell + margin) away.
        const double reach = ring * cell_ + margin;
        if (best.d2 <= reach * reach)
        {
            break;
        }
    }
    return best;
}

}  // namespace hetnet
