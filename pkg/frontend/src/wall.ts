// Wall slot geometry. Slots fill row-major with rows growing upward, so a
// slot's position is a pure function of the wall fields and its index --
// the service never sends per-slot coordinates.

import type { PointDto, WallDto } from "./types";

export function wallSlotPosition(
  origin: PointDto,
  columns: number,
  slotSpacingM: number,
  index: number,
): PointDto {
  const row = Math.floor(index / columns);
  const col = index % columns;
  return {
    x: origin.x + col * slotSpacingM,
    y: origin.y,
    z: origin.z + row * slotSpacingM,
  };
}

export function wallSlots(wall: WallDto): Map<string, PointDto> {
  const slots = new Map<string, PointDto>();
  wall.assignments.forEach(([recordId], index) => {
    slots.set(recordId, wallSlotPosition(wall.origin, wall.columns, wall.slot_spacing_m, index));
  });
  return slots;
}
