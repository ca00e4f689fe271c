"""The ten-node example courier network.

Two local distribution centres (S1, S2) feed two terminal distribution centres (T1, T2)
through two sorting centres (H1, H2), an airport pair (A1, A2) and a rail station pair
(R1, R2). The arc set is chosen so that S1 -> T1 has exactly twelve transfer chains:

    S1-T1, S1-H1-T1, S1-H2-T1, S1-H1-H2-T1, S1-A1-A2-T1, S1-H1-A1-A2-T1,
    S1-A1-A2-H2-T1, S1-H1-A1-A2-H2-T1, S1-R1-R2-T1, S1-H1-R1-R2-T1,
    S1-R1-R2-H2-T1, S1-H1-R1-R2-H2-T1

There is no H2 -> H1 arc, nothing leaves a terminal and nothing enters S2, which keeps
the list closed. All numeric values below are illustrative choices, not measured data.
"""
from netopt.models import ArcMode, Demand, Instance, Node, NodeKind, ServiceArc

S1, S2, H1, H2, A1, A2, R1, R2, T1, T2 = range(10)

# Road trucks carry 60 standard units, air containers 20 and rail wagons 120.
ROAD_SIZE = 60.0
AIR_SIZE = 20.0
RAIL_SIZE = 120.0


def _road(source: int, target: int, hours: float, trip_cost: float) -> ServiceArc:
    return ServiceArc(
        source=source, target=target, travel_time=hours, unit_trip_cost=trip_cost,
        carrier_size=ROAD_SIZE, mode=ArcMode.ROAD,
    )


def courier10_nodes():
    ldc = NodeKind.LOCAL_DISTRIBUTION_CENTER
    tdc = NodeKind.TERMINAL_DISTRIBUTION_CENTER
    return [
        # Origins: no sorting capacity limit, light handling.
        Node(id=S1, name="S1", kind=ldc, accum_param=10.5, op_time=0.5, op_cost=1.0),
        Node(id=S2, name="S2", kind=ldc, accum_param=10.5, op_time=0.5, op_cost=1.0),
        # Sorting centres: 1000 units/day, one hour and 2.0 per unit to sort.
        Node(id=H1, name="H1", kind=NodeKind.SORTING_CENTER, accum_param=10.5,
             transfer_capacity=1000.0, op_time=1.0, op_cost=2.0),
        Node(id=H2, name="H2", kind=NodeKind.SORTING_CENTER, accum_param=10.5,
             transfer_capacity=1000.0, op_time=1.0, op_cost=2.0),
        # Airports: smaller capacity, slower and dearer handling.
        Node(id=A1, name="A1", kind=NodeKind.AIRPORT, accum_param=11.0,
             transfer_capacity=600.0, op_time=1.5, op_cost=4.0),
        Node(id=A2, name="A2", kind=NodeKind.AIRPORT, accum_param=11.0,
             transfer_capacity=600.0, op_time=1.5, op_cost=4.0),
        # Rail stations: cheap handling, two hours to load.
        Node(id=R1, name="R1", kind=NodeKind.RAIL_STATION, accum_param=11.5,
             transfer_capacity=800.0, op_time=2.0, op_cost=1.5),
        Node(id=R2, name="R2", kind=NodeKind.RAIL_STATION, accum_param=11.5,
             transfer_capacity=800.0, op_time=2.0, op_cost=1.5),
        # Terminals: even arrivals assumed, so the textbook 12 would also do; 10 is used.
        Node(id=T1, name="T1", kind=tdc, accum_param=10.0, op_time=0.5, op_cost=1.0),
        Node(id=T2, name="T2", kind=tdc, accum_param=10.0, op_time=0.5, op_cost=1.0),
    ]


def courier10_arcs():
    return [
        # Long-haul road links (hours, cost per trip).
        _road(S1, T1, 20.0, 900.0),
        _road(S2, T2, 18.0, 850.0),
        _road(H1, T1, 16.0, 800.0),
        _road(H1, T2, 14.0, 700.0),
        # Feeder road links into the hubs and stations.
        _road(S1, H1, 2.0, 150.0),
        _road(S1, H2, 6.0, 350.0),
        _road(S1, A1, 1.5, 120.0),
        _road(S1, R1, 2.0, 150.0),
        _road(S2, H1, 3.0, 200.0),
        _road(S2, A1, 2.0, 150.0),
        _road(S2, R1, 2.5, 180.0),
        _road(H1, H2, 5.0, 300.0),
        _road(H1, A1, 1.5, 120.0),
        _road(H1, R1, 1.5, 120.0),
        # Line haul: fast but costly air, slow bulk rail.
        ServiceArc(source=A1, target=A2, travel_time=3.0, unit_trip_cost=2400.0,
                   carrier_size=AIR_SIZE, mode=ArcMode.AIR),
        ServiceArc(source=R1, target=R2, travel_time=10.0, unit_trip_cost=1200.0,
                   carrier_size=RAIL_SIZE, mode=ArcMode.RAIL),
        # Last-mile road links out of the far-side facilities.
        _road(H2, T1, 4.0, 250.0),
        _road(H2, T2, 5.0, 300.0),
        _road(A2, T1, 1.5, 120.0),
        _road(A2, T2, 2.0, 150.0),
        _road(A2, H2, 1.0, 100.0),
        _road(R2, T1, 1.5, 120.0),
        _road(R2, T2, 2.0, 150.0),
        _road(R2, H2, 1.0, 100.0),
    ]


def courier10_demands():
    # Units per day with next-day-and-a-half deadlines in hours.
    return [
        Demand(origin=S1, dest=T1, volume=240.0, deadline=36.0),
        Demand(origin=S1, dest=T2, volume=180.0, deadline=36.0),
        Demand(origin=S2, dest=T1, volume=150.0, deadline=40.0),
        Demand(origin=S2, dest=T2, volume=120.0, deadline=36.0),
    ]


def courier10_instance() -> Instance:
    """The example network; λ = 2 currency units per unit-hour of waiting"""
    return Instance(
        nodes=courier10_nodes(),
        arcs=courier10_arcs(),
        demands=courier10_demands(),
        time_value=2.0,
        courier_class="standard",
    )
