#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
# ------------------------------------------------------------------------
# mmrt - mobility-aware mmWave ray-tracing channel simulator
# Copyright (C) 2026 The mmrt authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------

"""Convert a SUMO floating-car-data export (``--fcd-output``) to the mmrt trace CSV.

SUMO headings are compass degrees (0 = north, clockwise); mmrt headings are radians
counter-clockwise from +x. Vehicle types are mapped to actor kinds by substring.
"""

import argparse
import csv
import math
import sys
import xml.etree.ElementTree as ET

KINDS = ("bus", "truck", "pedestrian", "car")


def actor_kind(vtype, is_person):
    if is_person:
        return "pedestrian"
    vtype = (vtype or "").lower()
    for k in KINDS:
        if k in vtype:
            return k
    if "trailer" in vtype or "delivery" in vtype:
        return "truck"
    return "car"


def heading_rad(angle_deg):
    return math.remainder(math.radians(90.0 - float(angle_deg)), 2.0 * math.pi)


def convert(src, dst, offset_x=0.0, offset_y=0.0):
    writer = csv.writer(dst, lineterminator="\n")
    writer.writerow(["time", "id", "kind", "x", "y", "heading", "speed"])
    rows = 0
    for _, elem in ET.iterparse(src, events=("end",)):
        if elem.tag != "timestep":
            continue
        t = float(elem.get("time"))
        for actor in elem:
            if actor.tag not in ("vehicle", "person"):
                continue
            writer.writerow([
                repr(t),
                actor.get("id"),
                actor_kind(actor.get("type"), actor.tag == "person"),
                repr(float(actor.get("x")) + offset_x),
                repr(float(actor.get("y")) + offset_y),
                repr(heading_rad(actor.get("angle", "90"))),
                repr(float(actor.get("speed", "0"))),
            ])
            rows += 1
        elem.clear()
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fcd", help="SUMO FCD XML file")
    ap.add_argument("-o", "--out", help="output CSV (standard output when omitted)")
    ap.add_argument("--offset-x", type=float, default=0.0, help="added to every x (m)")
    ap.add_argument("--offset-y", type=float, default=0.0, help="added to every y (m)")
    args = ap.parse_args(argv)
    if args.out:
        with open(args.out, "w", newline="") as f:
            rows = convert(args.fcd, f, args.offset_x, args.offset_y)
    else:
        rows = convert(args.fcd, sys.stdout, args.offset_x, args.offset_y)
    print(f"{rows} rows", file=sys.stderr)


if __name__ == "__main__":
    main()
